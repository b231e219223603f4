#include "pan/nn/mlp.hpp"

#include <cmath>
#include <random>

#include "pan/common/error.hpp"
#include "pan/nn/hyper_dual.hpp"

namespace pan::nn {

std::string to_string(Activation activation) {
  switch (activation) {
    case Activation::tanh:
      return "tanh";
  }
  return "unknown";
}

Activation activation_from_string(const std::string& name) {
  if (name == "tanh") return Activation::tanh;
  throw ContractViolation("unknown activation '" + name + "'");
}

void MlpSpec::validate() const {
  PAN_REQUIRE(input_dim >= 1, "input_dim must be positive");
  PAN_REQUIRE(output_dim >= 1, "output_dim must be positive");
  PAN_REQUIRE(depth >= 1, "depth must be positive");
  PAN_REQUIRE(width >= 1, "width must be positive");
}

Eigen::Index layer_offset(const MlpSpec& spec, int index) {
  Eigen::Index offset = 0;
  for (int l = 0; l < index; ++l) {
    offset += static_cast<Eigen::Index>(spec.fan_out(l)) * (spec.fan_in(l) + 1);
  }
  return offset;
}

Eigen::Index param_count(const MlpSpec& spec) {
  spec.validate();
  return layer_offset(spec, spec.layer_count());
}

ConstLayerView layer(const MlpSpec& spec, const ParamVector& params, int index) {
  const Eigen::Index off = layer_offset(spec, index);
  const int out = spec.fan_out(index);
  const int in = spec.fan_in(index);
  return {Eigen::Map<const RowMajorMatrix>(params.data() + off, out, in),
          Eigen::Map<const Eigen::VectorXd>(params.data() + off + Eigen::Index(out) * in, out)};
}

LayerView layer(const MlpSpec& spec, ParamVector& params, int index) {
  const Eigen::Index off = layer_offset(spec, index);
  const int out = spec.fan_out(index);
  const int in = spec.fan_in(index);
  return {Eigen::Map<RowMajorMatrix>(params.data() + off, out, in),
          Eigen::Map<Eigen::VectorXd>(params.data() + off + Eigen::Index(out) * in, out)};
}

ParamVector init_params(const MlpSpec& spec, std::uint64_t seed) {
  ParamVector params = ParamVector::Zero(param_count(spec));
  std::mt19937_64 rng(seed);
  for (int l = 0; l < spec.layer_count(); ++l) {
    const double limit = std::sqrt(6.0 / (spec.fan_in(l) + spec.fan_out(l)));
    std::uniform_real_distribution<double> dist(-limit, limit);
    auto view = layer(spec, params, l);
    for (Eigen::Index i = 0; i < view.weight.rows(); ++i) {
      for (Eigen::Index j = 0; j < view.weight.cols(); ++j) view.weight(i, j) = dist(rng);
    }
  }
  return params;
}

namespace {

void check_input(const MlpSpec& spec, const ParamVector& params, std::span<const double> x) {
  spec.validate();
  PAN_REQUIRE(static_cast<int>(x.size()) == spec.input_dim, "input has wrong dimension");
  PAN_REQUIRE(params.size() == param_count(spec), "parameter vector has wrong length");
  for (double v : x) {
    if (!std::isfinite(v)) throw DomainError("non-finite network input");
  }
}

double activate(double a) { return std::tanh(a); }

template <class T>
HyperDual<T> activate(const HyperDual<T>& a) {
  return tanh(a);
}

template <class Scalar>
std::vector<Scalar> propagate(const MlpSpec& spec, const ParamVector& params,
                              std::vector<Scalar> h) {
  for (int l = 0; l < spec.layer_count(); ++l) {
    const auto view = layer(spec, params, l);
    std::vector<Scalar> next(static_cast<std::size_t>(view.weight.rows()));
    for (Eigen::Index i = 0; i < view.weight.rows(); ++i) {
      Scalar acc(view.bias(i));
      for (Eigen::Index j = 0; j < view.weight.cols(); ++j) {
        acc += h[static_cast<std::size_t>(j)] * view.weight(i, j);
      }
      next[static_cast<std::size_t>(i)] = l == spec.depth ? acc : activate(acc);
    }
    h = std::move(next);
  }
  return h;
}

}  // namespace

Eigen::VectorXd forward(const MlpSpec& spec, const ParamVector& params,
                        std::span<const double> x) {
  check_input(spec, params, x);
  const auto out = propagate(spec, params, std::vector<double>(x.begin(), x.end()));
  return Eigen::Map<const Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

SecondOrderEval forward_second_order(const MlpSpec& spec, const ParamVector& params,
                                     std::span<const double> x) {
  check_input(spec, params, x);
  SecondOrderEval eval;
  eval.value.resize(spec.output_dim);
  eval.input_gradient.resize(spec.output_dim, spec.input_dim);
  eval.input_hessian_diagonal.resize(spec.output_dim, spec.input_dim);

  using HD = HyperDual<double>;
  for (int k = 0; k < spec.input_dim; ++k) {
    std::vector<HD> h(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
      h[j] = static_cast<int>(j) == k ? HD::variable(x[j]) : HD(x[j]);
    }
    const auto out = propagate(spec, params, std::move(h));
    for (int o = 0; o < spec.output_dim; ++o) {
      const auto& r = out[static_cast<std::size_t>(o)];
      eval.value(o) = r.re;
      eval.input_gradient(o, k) = r.e1;
      eval.input_hessian_diagonal(o, k) = r.e12;
    }
  }
  return eval;
}

}  // namespace pan::nn
