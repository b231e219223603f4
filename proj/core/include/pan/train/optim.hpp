#pragma once

#include <limits>
#include <string>

#include "pan/nn/mlp.hpp"

namespace pan::train {

enum class OptimizerKind { sgd, adam };

std::string to_string(OptimizerKind kind);
OptimizerKind optimizer_from_string(const std::string& name);

/// Plain gradient step or Adam (beta1 0.9, beta2 0.999, eps 1e-8) with bias correction.
class Optimizer {
 public:
  Optimizer() = default;
  Optimizer(OptimizerKind kind, Eigen::Index size);

  void step(nn::ParamVector& params, const nn::ParamVector& grad, double lr);

  OptimizerKind kind() const noexcept { return kind_; }
  long steps() const noexcept { return t_; }

 private:
  OptimizerKind kind_ = OptimizerKind::sgd;
  nn::ParamVector m_, v_;
  long t_ = 0;
};

struct SchedulerConfig {
  double min_lr = 1e-4;
  int patience = 3000;
  int start_epoch = 0;  // no halving before this epoch
};

/// Halve the learning rate after `patience` epochs without strict improvement.
struct PlateauScheduler {
  double lr = 1e-3;
  double best = std::numeric_limits<double>::infinity();
  int since_improvement = 0;

  /// Returns true when the learning rate was halved.
  bool update(double loss, int epoch, const SchedulerConfig& config);
};

}  // namespace pan::train
