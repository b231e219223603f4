#include "pan/train/outputs.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <ostream>

#include "pan/common/csv.hpp"
#include "pan/nn/batch.hpp"

namespace pan::train {

using nlohmann::ordered_json;

namespace {

std::vector<std::string> breakdown_header(const std::string& prefix) {
  return {prefix + "_objective", prefix + "_pde",         prefix + "_boundary",
          prefix + "_initial",   prefix + "_adversarial", prefix + "_total"};
}

void append(std::vector<double>& row, const LossBreakdown& b) {
  row.insert(row.end(), {b.objective, b.pde, b.boundary, b.initial, b.adversarial, b.total});
}

// JSON has no NaN; absent metrics become null
ordered_json number(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(); }

ordered_json metrics_only(const NetworkMetrics& m) {
  ordered_json j;
  j["objective"] = number(m.objective);
  j["max_u_error"] = number(m.max_u_error);
  j["max_second_derivative_error"] = number(m.max_second_derivative_error);
  j["max_control_error"] = number(m.max_control_error);
  j["residual_mse"] = number(m.residual_mse);
  j["residual_max"] = number(m.residual_max);
  return j;
}

ordered_json network_json(const NetworkMetrics& m, const NetworkState& net) {
  auto j = metrics_only(m);
  j["best_value"] = number(net.best_value);
  j["best_epoch"] = net.best_epoch;
  j["final_lr"] = net.scheduler.lr;
  return j;
}

}  // namespace

void write_history_csv(std::ostream& out, const TrainState& state, const TrainerConfig& config) {
  std::vector<std::string> header{"epoch"};
  for (auto& h : breakdown_header("solver")) header.push_back(h);
  for (auto& h : breakdown_header("discriminator")) header.push_back(h);
  header.push_back("lr_solver");
  header.push_back("lr_discriminator");
  CsvWriter csv(out, header);
  const auto n = state.history.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = state.history[i];
    if (r.epoch % config.history_every != 0 && i + 1 != n) continue;
    std::vector<double> row{static_cast<double>(r.epoch)};
    append(row, r.solver);
    append(row, r.discriminator);
    row.push_back(r.lr_solver);
    row.push_back(r.lr_discriminator);
    csv.row(row);
  }
}

void write_solution_csv(std::ostream& out, const TrainState& state, const TrainerConfig& config,
                        const TrainingSetup& setup) {
  const auto& problem = *setup.problem;
  const int d = problem.spatial_dim();
  const bool distributed = problem.control_kind() == problems::ControlKind::distributed;
  const bool pan = config.mode == TrainMode::pan;
  const Eigen::MatrixXd G = problem.evaluation_grid();

  std::vector<std::string> header;
  header.push_back("x");
  if (d == 2) header.push_back("y");
  header.insert(header.end(), {"u_analytic", "lap_analytic"});
  if (distributed) header.push_back("f_analytic");
  std::vector<std::string> nets{"solver"};
  if (pan) nets.push_back("discriminator");
  for (const auto& n : nets) {
    header.insert(header.end(), {"u_" + n, "error_" + n, "lap_" + n, "residual_" + n});
    if (distributed) header.push_back("f_" + n);
  }
  CsvWriter csv(out, header);

  std::vector<nn::ForwardTape> tapes;
  tapes.push_back(nn::forward_batch(setup.solver_spec, state.solver.best_params, G, 2));
  if (pan) {
    tapes.push_back(
        nn::forward_batch(setup.discriminator_spec, state.discriminator.best_params, G, 2));
  }
  std::vector<double> hess(static_cast<std::size_t>(d));
  for (Eigen::Index c = 0; c < G.cols(); ++c) {
    const std::span<const double> x(G.data() + c * d, static_cast<std::size_t>(d));
    std::vector<double> row(x.begin(), x.end());
    const double ua = problem.analytic_solution(x);
    double lap_a = 0.0;
    for (double v : problem.analytic_hessian_diag(x)) lap_a += v;
    row.push_back(ua);
    row.push_back(lap_a);
    if (distributed) row.push_back(problem.analytic_control(x));
    for (const auto& t : tapes) {
      const auto& ev = t.output;
      const double u = ev.value()(0, c);
      const double f = distributed ? ev.value()(1, c) : 0.0;
      double lap = 0.0;
      for (int j = 0; j < d; ++j) {
        hess[static_cast<std::size_t>(j)] = ev.hessian_diag(j)(0, c);
        lap += hess[static_cast<std::size_t>(j)];
      }
      row.insert(row.end(), {u, u - ua, lap, problem.pde_residual(x, u, hess, f)});
      if (distributed) row.push_back(f);
    }
    csv.row(row);
  }
}

RunSummary summarize(const TrainState& state, const TrainerConfig& config,
                     const TrainingSetup& setup) {
  RunSummary s;
  s.solver = evaluate_network(*setup.problem, setup.solver_spec, state.solver.best_params,
                              setup.samples);
  s.solver_final = evaluate_network(*setup.problem, setup.solver_spec, state.solver.params,
                                    setup.samples);
  if (config.mode == TrainMode::pan) {
    s.discriminator = evaluate_network(*setup.problem, setup.discriminator_spec,
                                       state.discriminator.best_params, setup.samples);
  }
  return s;
}

std::string metrics_json(const RunSummary& summary, const TrainState& state,
                         const TrainerConfig& config) {
  ordered_json j;
  j["problem"] = config.problem;
  j["mode"] = to_string(config.mode);
  j["seed"] = config.seed;
  j["epochs"] = state.epoch;
  j["solver"] = network_json(summary.solver, state.solver);
  if (config.mode == TrainMode::pan) {
    j["discriminator"] = network_json(summary.discriminator, state.discriminator);
  }
  j["solver_final_weights"] = metrics_only(summary.solver_final);
  if (!state.history.empty()) {
    const auto& last = state.history.back();
    j["final_solver_loss"] = number(last.solver.total);
    j["final_solver_objective"] = number(last.solver.objective);
    if (config.mode == TrainMode::pan) {
      j["final_discriminator_loss"] = number(last.discriminator.total);
    }
  }
  j["deterministic"] = true;
  j["wall_seconds"] = summary.wall_seconds;
  return j.dump(2) + "\n";
}

}  // namespace pan::train
