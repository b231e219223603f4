#include "pan/train/losses.hpp"

#include <array>
#include <cmath>
#include <string>

#include "pan/common/error.hpp"
#include "pan/nn/batch.hpp"

namespace pan::train {

using Eigen::Index;
using Eigen::MatrixXd;
using problems::ControlKind;

namespace {

std::span<const double> column(const MatrixXd& X, Index c) {
  return {X.data() + c * X.rows(), static_cast<std::size_t>(X.rows())};
}

void check_finite(double v, const char* what, Index sample) {
  if (!std::isfinite(v)) {
    throw DivergenceError(std::string("non-finite ") + what + " at sample " +
                          std::to_string(sample));
  }
}

// Squared misfit against a pointwise target on a value-only batch; mean over points.
template <class Target>
double target_mean(const nn::ForwardTape& tape, const MatrixXd& X, Target target,
                   nn::BatchEval* adjoint, double scale) {
  const Index count = X.cols();
  double sum = 0.0;
  for (Index c = 0; c < count; ++c) {
    const double diff = tape.output.data(0, c) - target(column(X, c));
    sum += diff * diff;
    if (adjoint) adjoint->data(0, c) += scale * 2.0 * diff / static_cast<double>(count);
  }
  return sum / static_cast<double>(count);
}

}  // namespace

nn::MlpSpec network_spec(const problems::ControlProblem& problem, int depth, int width) {
  nn::MlpSpec spec{problem.spatial_dim(), problem.output_dim(), depth, width,
                   nn::Activation::tanh};
  spec.validate();
  return spec;
}

LossWithGradient evaluate_loss(const problems::ControlProblem& problem, const nn::MlpSpec& spec,
                               const nn::ParamVector& params, const problems::SampleSet& samples,
                               const PenaltyWeights& w, const AdversarialTerm* adv,
                               bool with_gradient) {
  PAN_REQUIRE(spec.input_dim == problem.spatial_dim(), "network input does not match problem");
  PAN_REQUIRE(spec.output_dim == problem.output_dim(), "network output does not match problem");
  const int d = problem.spatial_dim();
  const bool distributed = problem.control_kind() == ControlKind::distributed;
  const double rho = problem.rho();

  LossWithGradient out;
  LossBreakdown& L = out.breakdown;

  // interior: objective misfit, distributed control, PDE residual
  const MatrixXd& Xc = samples.collocation;
  const Index N = Xc.cols();
  PAN_REQUIRE(N >= 1, "no collocation points");
  const nn::ForwardTape tape = nn::forward_batch(spec, params, Xc, 2);
  const nn::BatchEval& ev = tape.output;

  std::vector<double> misfit(static_cast<std::size_t>(N));
  std::vector<double> residual(static_cast<std::size_t>(N));
  std::array<double, 3> hess{};
  double misfit_sum = 0.0, control_sum = 0.0, pde_sum = 0.0;
  for (Index m = 0; m < N; ++m) {
    const auto x = column(Xc, m);
    const double u = ev.value()(0, m);
    const double f = distributed ? ev.value()(1, m) : 0.0;
    for (int j = 0; j < d; ++j) hess[static_cast<std::size_t>(j)] = ev.hessian_diag(j)(0, m);
    const double diff = u - problem.desired_state(x);
    const double r = problem.pde_residual(x, u, std::span<const double>(hess.data(), d), f);
    check_finite(r, "PDE residual", m);
    misfit[static_cast<std::size_t>(m)] = diff;
    residual[static_cast<std::size_t>(m)] = r;
    misfit_sum += diff * diff;
    control_sum += f * f;
    pde_sum += r * r;
  }
  const double inv_n = 1.0 / static_cast<double>(N);
  L.objective = 0.5 * misfit_sum * inv_n + (distributed ? 0.5 * rho * control_sum * inv_n : 0.0);
  L.pde = pde_sum * inv_n;

  // boundary control values enter J directly
  nn::ForwardTape control_tape;
  const bool has_control = !distributed && samples.control.cols() > 0;
  if (has_control) {
    control_tape = nn::forward_batch(spec, params, samples.control, 0);
    double s = 0.0;
    for (Index c = 0; c < samples.control.cols(); ++c) {
      const double u = control_tape.output.data(0, c);
      s += u * u;
    }
    L.objective += 0.5 * rho * s;
  }

  // adversarial coupling: d(total)/dJ
  double dJ = 1.0;
  if (adv && adv->omega != 0.0) {
    double gap = L.objective - adv->anchor_objective;
    if (adv->one_sided && gap < 0.0) gap = 0.0;
    L.adversarial = gap * gap;
    dJ += 2.0 * adv->omega * gap;
  }

  nn::ParamVector grad;
  if (with_gradient) grad = nn::ParamVector::Zero(params.size());

  nn::BatchEval adj;
  if (with_gradient) {
    adj = ev.zeros_like();
    for (Index m = 0; m < N; ++m) {
      const auto x = column(Xc, m);
      const double u = ev.value()(0, m);
      const double f = distributed ? ev.value()(1, m) : 0.0;
      for (int j = 0; j < d; ++j) hess[static_cast<std::size_t>(j)] = ev.hessian_diag(j)(0, m);
      const auto part =
          problem.pde_residual_partials(x, u, std::span<const double>(hess.data(), d), f);
      const double r2 = 2.0 * w.pde * residual[static_cast<std::size_t>(m)] * inv_n;
      adj.value()(0, m) = dJ * misfit[static_cast<std::size_t>(m)] * inv_n + r2 * part.d_value;
      if (distributed) adj.value()(1, m) = dJ * rho * f * inv_n + r2 * part.d_control;
      for (int j = 0; j < d; ++j) {
        adj.hessian_diag(j)(0, m) = r2 * part.d_hessian[static_cast<std::size_t>(j)];
      }
    }
    nn::backward_batch(spec, params, tape, adj, grad);
    if (has_control) {
      nn::BatchEval cadj = control_tape.output.zeros_like();
      for (Index c = 0; c < samples.control.cols(); ++c) {
        cadj.data(0, c) = dJ * rho * control_tape.output.data(0, c);
      }
      nn::backward_batch(spec, params, control_tape, cadj, grad);
    }
  }

  if (samples.boundary.cols() > 0) {
    const nn::ForwardTape bt = nn::forward_batch(spec, params, samples.boundary, 0);
    nn::BatchEval badj = bt.output.zeros_like();
    L.boundary = target_mean(
        bt, samples.boundary, [&](std::span<const double> x) { return problem.boundary_target(x); },
        with_gradient ? &badj : nullptr, w.boundary);
    if (with_gradient) nn::backward_batch(spec, params, bt, badj, grad);
  }

  if (samples.initial.cols() > 0) {
    const nn::ForwardTape it = nn::forward_batch(spec, params, samples.initial, 0);
    nn::BatchEval iadj = it.output.zeros_like();
    L.initial = target_mean(
        it, samples.initial, [&](std::span<const double> x) { return problem.initial_target(x); },
        with_gradient ? &iadj : nullptr, w.initial);
    if (with_gradient) nn::backward_batch(spec, params, it, iadj, grad);
  }

  const double omega = adv ? adv->omega : 0.0;
  L.total = L.objective + w.pde * L.pde + w.boundary * L.boundary + w.initial * L.initial +
            omega * L.adversarial;
  if (!std::isfinite(L.total)) throw DivergenceError("non-finite loss");
  out.gradient = std::move(grad);
  return out;
}

double objective_value(const problems::ControlProblem& problem, const nn::MlpSpec& spec,
                       const nn::ParamVector& params, const problems::SampleSet& samples) {
  const bool distributed = problem.control_kind() == ControlKind::distributed;
  const double rho = problem.rho();
  const MatrixXd& Xc = samples.collocation;
  const MatrixXd V = nn::forward_values(spec, params, Xc);
  double misfit = 0.0, control = 0.0;
  for (Index m = 0; m < Xc.cols(); ++m) {
    const double diff = V(0, m) - problem.desired_state(column(Xc, m));
    misfit += diff * diff;
    if (distributed) control += V(1, m) * V(1, m);
  }
  const double inv_n = 1.0 / static_cast<double>(Xc.cols());
  double J = 0.5 * misfit * inv_n + (distributed ? 0.5 * rho * control * inv_n : 0.0);
  if (!distributed && samples.control.cols() > 0) {
    const MatrixXd C = nn::forward_values(spec, params, samples.control);
    J += 0.5 * rho * C.row(0).squaredNorm();
  }
  return J;
}

LossBreakdown penalty_loss(const problems::ControlProblem& problem, const nn::MlpSpec& spec,
                           const nn::ParamVector& params, const problems::SampleSet& samples,
                           const PenaltyWeights& weights) {
  return evaluate_loss(problem, spec, params, samples, weights, nullptr, false).breakdown;
}

LossBreakdown discriminator_loss(const problems::ControlProblem& problem, const nn::MlpSpec& spec,
                                 const nn::ParamVector& params_d,
                                 const problems::SampleSet& samples,
                                 const PenaltyWeights& weights_d) {
  return penalty_loss(problem, spec, params_d, samples, weights_d);
}

LossBreakdown solver_loss(const problems::ControlProblem& problem, const nn::MlpSpec& spec,
                          const nn::ParamVector& params_s, double discriminator_objective,
                          const problems::SampleSet& samples, const PenaltyWeights& weights_s,
                          double omega, bool one_sided) {
  const AdversarialTerm adv{omega, discriminator_objective, one_sided};
  return evaluate_loss(problem, spec, params_s, samples, weights_s, &adv, false).breakdown;
}

}  // namespace pan::train
