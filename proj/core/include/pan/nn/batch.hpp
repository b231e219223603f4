#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "pan/nn/mlp.hpp"

namespace pan::nn {

/// Network outputs over a batch, channel-stacked as columns:
///   [ value | d/dx_0 ... d/dx_{d-1} | d2/dx_0^2 ... d2/dx_{d-1}^2 ]
/// each block output_dim x batch. Order 0 keeps only the value block.
struct BatchEval {
  int input_dim = 0;
  int batch = 0;
  int order = 0;
  Eigen::MatrixXd data;

  int channels() const noexcept { return order == 2 ? 1 + 2 * input_dim : 1; }

  auto value() { return data.middleCols(0, batch); }
  auto value() const { return data.middleCols(0, batch); }
  auto gradient(int j) { return data.middleCols(Eigen::Index(1 + j) * batch, batch); }
  auto gradient(int j) const { return data.middleCols(Eigen::Index(1 + j) * batch, batch); }
  auto hessian_diag(int j) { return data.middleCols(Eigen::Index(1 + input_dim + j) * batch, batch); }
  auto hessian_diag(int j) const {
    return data.middleCols(Eigen::Index(1 + input_dim + j) * batch, batch);
  }

  /// Zero-filled buffer of the same shape, for adjoints.
  BatchEval zeros_like() const;
};

/// Intermediate activations of one batched forward pass, kept for the reverse sweep.
struct ForwardTape {
  int input_dim = 0;
  int batch = 0;
  int order = 0;
  std::vector<Eigen::MatrixXd> inputs;  // per layer, stacked layer input
  std::vector<Eigen::MatrixXd> tanh_value;  // per hidden layer, value block of tanh(a)
  std::vector<Eigen::MatrixXd> pre_first;   // per hidden layer, first-derivative channels of a
  std::vector<Eigen::MatrixXd> pre_second;  // per hidden layer, second-derivative channels of a
  BatchEval output;
};

/// X is input_dim x batch, one sample per column. order is 0 or 2.
/// Throws DivergenceError naming the first sample whose output is non-finite.
ForwardTape forward_batch(const MlpSpec& spec, const ParamVector& params,
                          const Eigen::MatrixXd& X, int order);

/// Value-only convenience wrapper; returns output_dim x batch.
Eigen::MatrixXd forward_values(const MlpSpec& spec, const ParamVector& params,
                               const Eigen::MatrixXd& X);

/// Reverse sweep: accumulates d(loss)/d(params) into `grad` given the adjoint of
/// the stacked outputs (same shape as tape.output).
void backward_batch(const MlpSpec& spec, const ParamVector& params, const ForwardTape& tape,
                    const BatchEval& adjoint, ParamVector& grad);

/// Scalar loss of a batch evaluation; writes d(loss)/d(eval) into `adjoint`
/// (pre-zeroed, same shape) and returns the loss.
using BatchLoss = std::function<double(const BatchEval& eval, BatchEval& adjoint)>;

struct LossAndGradient {
  double loss = 0.0;
  ParamVector gradient;
};

LossAndGradient loss_gradient(const MlpSpec& spec, const ParamVector& params,
                              const Eigen::MatrixXd& X, int order, const BatchLoss& loss);

}  // namespace pan::nn
