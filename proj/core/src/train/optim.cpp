#include "pan/train/optim.hpp"

#include <cmath>

#include "pan/common/error.hpp"

namespace pan::train {

std::string to_string(OptimizerKind kind) { return kind == OptimizerKind::adam ? "adam" : "sgd"; }

OptimizerKind optimizer_from_string(const std::string& name) {
  if (name == "adam") return OptimizerKind::adam;
  if (name == "sgd") return OptimizerKind::sgd;
  throw ContractViolation("unknown optimizer '" + name + "'");
}

Optimizer::Optimizer(OptimizerKind kind, Eigen::Index size) : kind_(kind) {
  if (kind_ == OptimizerKind::adam) {
    m_ = nn::ParamVector::Zero(size);
    v_ = nn::ParamVector::Zero(size);
  }
}

void Optimizer::step(nn::ParamVector& params, const nn::ParamVector& grad, double lr) {
  PAN_REQUIRE(params.size() == grad.size(), "gradient length mismatch");
  ++t_;
  if (kind_ == OptimizerKind::sgd) {
    params.noalias() -= lr * grad;
    return;
  }
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  PAN_REQUIRE(m_.size() == params.size(), "optimizer state size mismatch");
  m_ = b1 * m_ + (1.0 - b1) * grad;
  v_ = b2 * v_ + (1.0 - b2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  params.array() -= lr * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps);
}

bool PlateauScheduler::update(double loss, int epoch, const SchedulerConfig& config) {
  if (loss < best) {
    best = loss;
    since_improvement = 0;
  } else {
    ++since_improvement;
  }
  if (since_improvement >= config.patience && lr / 2.0 >= config.min_lr &&
      epoch >= config.start_epoch) {
    lr /= 2.0;
    since_improvement = 0;
    return true;
  }
  return false;
}

}  // namespace pan::train
