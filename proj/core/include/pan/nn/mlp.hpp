#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pan::nn {

enum class Activation { tanh };

std::string to_string(Activation activation);
Activation activation_from_string(const std::string& name);

/// Fully connected network: input -> depth hidden tanh layers of equal width -> linear output.
struct MlpSpec {
  int input_dim = 1;
  int output_dim = 1;
  int depth = 1;
  int width = 1;
  Activation activation = Activation::tanh;

  void validate() const;

  /// Number of affine maps (depth + 1).
  int layer_count() const noexcept { return depth + 1; }
  int fan_in(int layer) const noexcept { return layer == 0 ? input_dim : width; }
  int fan_out(int layer) const noexcept { return layer == depth ? output_dim : width; }

  friend bool operator==(const MlpSpec&, const MlpSpec&) = default;
};

/// Flat parameters: for each layer in order, the weight matrix (fan_out x fan_in,
/// row-major) followed by its bias.
using ParamVector = Eigen::VectorXd;

Eigen::Index param_count(const MlpSpec& spec);

/// Offset of layer `layer`'s weights in the flat vector; its bias follows the weights.
Eigen::Index layer_offset(const MlpSpec& spec, int layer);

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct ConstLayerView {
  Eigen::Map<const RowMajorMatrix> weight;
  Eigen::Map<const Eigen::VectorXd> bias;
};

struct LayerView {
  Eigen::Map<RowMajorMatrix> weight;
  Eigen::Map<Eigen::VectorXd> bias;
};

ConstLayerView layer(const MlpSpec& spec, const ParamVector& params, int index);
LayerView layer(const MlpSpec& spec, ParamVector& params, int index);

/// Glorot-uniform weights, zero biases. Deterministic for a fixed seed.
ParamVector init_params(const MlpSpec& spec, std::uint64_t seed);

/// Plain evaluation at a single point. Throws ContractViolation on wrong input size
/// and DomainError on non-finite input.
Eigen::VectorXd forward(const MlpSpec& spec, const ParamVector& params,
                        std::span<const double> x);

struct SecondOrderEval {
  Eigen::VectorXd value;                 // output_dim
  Eigen::MatrixXd input_gradient;        // output_dim x input_dim
  Eigen::MatrixXd input_hessian_diagonal;  // output_dim x input_dim
};

/// Value, input gradient and pure second input derivatives at a single point via
/// hyper-dual propagation, one pass per input coordinate.
SecondOrderEval forward_second_order(const MlpSpec& spec, const ParamVector& params,
                                     std::span<const double> x);

}  // namespace pan::nn
