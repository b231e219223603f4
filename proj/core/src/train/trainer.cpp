#include "pan/train/trainer.hpp"

#include <algorithm>
#include <cmath>

#include "pan/common/error.hpp"
#include "pan/nn/batch.hpp"

namespace pan::train {

using Eigen::Index;

TrainingSetup make_setup(const TrainerConfig& config, const problems::ControlProblem& problem) {
  PAN_REQUIRE(config.problem == problem.name(), "config names a different problem");
  TrainingSetup s;
  s.problem = &problem;
  s.solver_spec = network_spec(problem, config.depth, config.width);
  s.discriminator_spec = s.solver_spec;
  s.samples = problem.sample_grid(config.n, config.n_boundary);
  return s;
}

namespace {

NetworkState make_network(const nn::MlpSpec& spec, std::uint64_t seed, OptimizerKind kind,
                          double lr) {
  NetworkState n;
  n.params = nn::init_params(spec, seed);
  n.best_params = n.params;
  n.optimizer = Optimizer(kind, n.params.size());
  n.scheduler.lr = lr;
  return n;
}

// best-weight snapshot of the pre-update parameters, so params and value correspond
void track_best(NetworkState& net, double value, int epoch, int warmup) {
  if (epoch > warmup && value < net.best_value) {
    net.best_value = value;
    net.best_params = net.params;
    net.best_epoch = epoch;
  }
}

}  // namespace

TrainState init_state(const TrainerConfig& config, const TrainingSetup& setup) {
  TrainState st;
  st.solver = make_network(setup.solver_spec, config.seed, config.optimizer, config.lr_solver);
  if (config.mode == TrainMode::pan) {
    st.discriminator =
        make_network(setup.discriminator_spec, config.seed + config.discriminator_seed_offset,
                     config.optimizer, config.lr_discriminator);
    st.discriminator_objective = objective_value(*setup.problem, setup.discriminator_spec,
                                                 st.discriminator.params, setup.samples);
  }
  return st;
}

void train_epoch(TrainState& state, const TrainerConfig& config, const TrainingSetup& setup) {
  const auto& problem = *setup.problem;
  const int epoch = state.epoch + 1;
  const int warmup = config.effective_warmup();
  EpochRecord rec;
  rec.epoch = epoch;

  // work on copies so a divergence leaves the state as it was
  NetworkState solver = state.solver;
  NetworkState disc;
  double anchor = state.discriminator_objective;

  if (config.mode == TrainMode::pan) {
    disc = state.discriminator;
    const bool frozen =
        config.freeze_discriminator_after >= 0 && epoch > config.freeze_discriminator_after;
    if (!frozen) {
      const auto d = evaluate_loss(problem, setup.discriminator_spec, disc.params, setup.samples,
                                   config.discriminator_weights, nullptr, true);
      rec.discriminator = d.breakdown;
      track_best(disc, d.breakdown.total, epoch, warmup);
      disc.optimizer.step(disc.params, d.gradient, disc.scheduler.lr);
      disc.scheduler.update(d.breakdown.total, epoch, config.schedule);
      anchor = objective_value(problem, setup.discriminator_spec, disc.params, setup.samples);
    } else {
      rec.discriminator = state.history.empty()
                              ? penalty_loss(problem, setup.discriminator_spec, disc.params,
                                             setup.samples, config.discriminator_weights)
                              : state.history.back().discriminator;
    }
    rec.lr_discriminator = disc.scheduler.lr;

    const AdversarialTerm adv{config.omega, anchor, config.one_sided};
    const auto s = evaluate_loss(problem, setup.solver_spec, solver.params, setup.samples,
                                 config.solver_weights, &adv, true);
    rec.solver = s.breakdown;
    track_best(solver, s.breakdown.objective, epoch, warmup);
    solver.optimizer.step(solver.params, s.gradient, solver.scheduler.lr);
    solver.scheduler.update(s.breakdown.total, epoch, config.schedule);
  } else {
    const auto s = evaluate_loss(problem, setup.solver_spec, solver.params, setup.samples,
                                 config.solver_weights, nullptr, true);
    rec.solver = s.breakdown;
    track_best(solver, s.breakdown.total, epoch, warmup);
    solver.optimizer.step(solver.params, s.gradient, solver.scheduler.lr);
    solver.scheduler.update(s.breakdown.total, epoch, config.schedule);
  }
  rec.lr_solver = solver.scheduler.lr;

  if (!solver.params.allFinite() || (config.mode == TrainMode::pan && !disc.params.allFinite())) {
    throw DivergenceError("non-finite parameters after update at epoch " + std::to_string(epoch));
  }

  state.solver = std::move(solver);
  if (config.mode == TrainMode::pan) {
    state.discriminator = std::move(disc);
    state.discriminator_objective = anchor;
  }
  state.epoch = epoch;
  state.history.push_back(rec);
}

void train(TrainState& state, const TrainerConfig& config, const TrainingSetup& setup,
           const ProgressFn& progress, int progress_every) {
  state.history.reserve(state.history.size() + static_cast<std::size_t>(config.max_epochs));
  while (state.epoch < config.max_epochs) {
    train_epoch(state, config, setup);
    if (progress && progress_every > 0 && state.epoch % progress_every == 0) progress(state);
  }
}

NetworkMetrics evaluate_network(const problems::ControlProblem& problem, const nn::MlpSpec& spec,
                                const nn::ParamVector& params,
                                const problems::SampleSet& samples) {
  NetworkMetrics m;
  const int d = problem.spatial_dim();
  const bool distributed = problem.control_kind() == problems::ControlKind::distributed;
  m.objective = objective_value(problem, spec, params, samples);
  m.residual_mse = penalty_loss(problem, spec, params, samples, PenaltyWeights{}).pde;

  const Eigen::MatrixXd G = problem.evaluation_grid();
  const auto tape = nn::forward_batch(spec, params, G, 2);
  const auto& ev = tape.output;
  std::vector<double> hess(static_cast<std::size_t>(d));
  if (distributed) m.max_control_error = 0.0;
  for (Index c = 0; c < G.cols(); ++c) {
    const std::span<const double> x(G.data() + c * d, static_cast<std::size_t>(d));
    const double u = ev.value()(0, c);
    const double f = distributed ? ev.value()(1, c) : 0.0;
    double lap = 0.0;
    for (int j = 0; j < d; ++j) {
      hess[static_cast<std::size_t>(j)] = ev.hessian_diag(j)(0, c);
      lap += hess[static_cast<std::size_t>(j)];
    }
    const auto ref = problem.analytic_hessian_diag(x);
    double lap_ref = 0.0;
    for (double v : ref) lap_ref += v;
    m.max_u_error = std::max(m.max_u_error, std::abs(u - problem.analytic_solution(x)));
    m.max_second_derivative_error = std::max(m.max_second_derivative_error, std::abs(lap - lap_ref));
    if (distributed) {
      m.max_control_error = std::max(m.max_control_error, std::abs(f - problem.analytic_control(x)));
    }
    m.residual_max = std::max(m.residual_max, std::abs(problem.pde_residual(x, u, hess, f)));
  }
  return m;
}

int plateau_epoch(const std::vector<double>& losses, double fraction) {
  PAN_REQUIRE(!losses.empty(), "empty loss curve");
  const double last = losses.back();
  const double tol = fraction * std::abs(last);
  for (std::size_t i = 0; i < losses.size(); ++i) {
    if (std::abs(losses[i] - last) <= tol) return static_cast<int>(i) + 1;
  }
  return static_cast<int>(losses.size());
}

}  // namespace pan::train
