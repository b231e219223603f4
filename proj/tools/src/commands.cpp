#include "pan_cli/commands.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "pan/common/csv.hpp"
#include "pan/common/error.hpp"
#include "pan/linear/search.hpp"
#include "pan/nn/checkpoint.hpp"
#include "pan/problems/control_problem.hpp"
#include "pan/train/config.hpp"
#include "pan/train/outputs.hpp"
#include "pan/train/trainer.hpp"
#include "pan/verify/properties.hpp"

#ifndef PAN_VERSION_STRING
#define PAN_VERSION_STRING "unknown"
#endif

namespace pan::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

ordered_json json_number(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(); }

struct Manifest {
  ordered_json j;

  Manifest(const GlobalOptions& g, const std::string& command) {
    j["command"] = command;
    j["command_line"] = g.command_line;
    j["config_path"] = nullptr;
    j["seed"] = g.seed ? ordered_json(*g.seed) : ordered_json();
    j["started_utc"] = utc_now();
    j["finished_utc"] = nullptr;
    j["version"] = PAN_VERSION_STRING;
    j["output_dir"] = g.out.empty() ? ordered_json() : ordered_json(fs::absolute(g.out).string());
    j["exit_code"] = nullptr;
  }

  void finish(const fs::path& dir, int code) {
    j["finished_utc"] = utc_now();
    j["exit_code"] = code;
    write_text(dir / "manifest.json", j.dump(2) + "\n");
  }
};

std::string require_out(const GlobalOptions& g, const char* command) {
  if (g.out.empty()) throw UsageError(fmt::format("{} needs --out DIR", command));
  return g.out.string();
}

linear::Matrix yaml_matrix(const YAML::Node& n, const std::string& key) {
  if (!n[key] || !n[key].IsSequence() || n[key].size() == 0) {
    throw UsageError(fmt::format("problem file: '{}' must be a non-empty list of rows", key));
  }
  const auto& rows = n[key];
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows[0].size());
  linear::Matrix M(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const auto row = rows[static_cast<std::size_t>(i)];
    if (!row.IsSequence() || static_cast<Eigen::Index>(row.size()) != c) {
      throw UsageError(fmt::format("problem file line {}: ragged row in '{}'", row.Mark().line + 1, key));
    }
    for (Eigen::Index j = 0; j < c; ++j) M(i, j) = row[static_cast<std::size_t>(j)].as<double>();
  }
  return M;
}

linear::LinearControlProblem load_linear_problem(const fs::path& path) {
  if (path.empty()) return linear::LinearControlProblem::toy();
  YAML::Node n;
  try {
    n = YAML::LoadFile(path.string());
  } catch (const YAML::Exception& e) {
    throw UsageError(fmt::format("{}:{}: {}", path.string(), e.mark.line + 1, e.msg));
  }
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    if (key != "A" && key != "K" && key != "b" && key != "rho") {
      throw UsageError(fmt::format("{}:{}: unknown key '{}'", path.string(), kv.first.Mark().line + 1, key));
    }
  }
  try {
    const auto A = yaml_matrix(n, "A");
    const auto K = yaml_matrix(n, "K");
    if (!n["b"] || !n["b"].IsSequence()) throw UsageError("problem file: 'b' must be a list");
    linear::Vector b(static_cast<Eigen::Index>(n["b"].size()));
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = n["b"][static_cast<std::size_t>(i)].as<double>();
    const double rho = n["rho"] ? n["rho"].as<double>() : 1.0;
    return linear::LinearControlProblem(A, K, b, rho);
  } catch (const YAML::Exception& e) {
    throw UsageError(fmt::format("{}:{}: {}", path.string(), e.mark.line + 1, e.msg));
  } catch (const ContractViolation& e) {
    throw UsageError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

linear::PlaneBounds bounds_from(const std::vector<double>& w) {
  if (w.size() != 4 || !(w[0] < w[1]) || !(w[2] < w[3])) {
    throw UsageError("--window expects u_min u_max y_min y_max with min < max");
  }
  return {w[0], w[1], w[2], w[3]};
}

void write_contour(const fs::path& path, const linear::PlaneField& f, const linear::PlaneBounds& b,
                   int resolution) {
  auto out = open_out(path);
  linear::write_csv(out, linear::contour_grid(f, b, resolution));
}

std::vector<std::string> point_header(const linear::LinearControlProblem& p) {
  std::vector<std::string> h;
  for (Eigen::Index i = 0; i < p.n(); ++i) h.push_back(p.n() == 1 ? "u" : fmt::format("u{}", i));
  for (Eigen::Index i = 0; i < p.m(); ++i) h.push_back(p.m() == 1 ? "y" : fmt::format("y{}", i));
  return h;
}

std::vector<std::string> point_cells(const linear::LinearControlProblem& p,
                                     const linear::PapPoint& x) {
  std::vector<std::string> c;
  c.push_back(format_double(linear::evaluate_objective(p, x)));
  c.push_back(format_double(linear::evaluate_remainder(p, x)));
  for (Eigen::Index i = 0; i < x.u.size(); ++i) c.push_back(format_double(x.u(i)));
  for (Eigen::Index i = 0; i < x.y.size(); ++i) c.push_back(format_double(x.y(i)));
  return c;
}

std::string fmt_sweep_value(double v) { return format_double(v); }

}  // namespace

void prepare_output_dir(const fs::path& out, bool force) {
  if (fs::exists(out)) {
    if (!fs::is_directory(out)) throw UsageError(out.string() + " exists and is not a directory");
    if (!fs::is_empty(out) && !force) {
      throw UsageError(out.string() + " is not empty (use --force to overwrite)");
    }
  } else {
    fs::create_directories(out);
  }
}

// ---------------------------------------------------------------- verify

int cmd_verify(const GlobalOptions& g, double lambda1, double lambda2, std::ostream& log) {
  verify::VerifyOptions opt;
  opt.lambda1 = lambda1;
  opt.lambda2 = lambda2;
  opt.seed = g.seed.value_or(0);
  if (!g.out.empty()) prepare_output_dir(g.out, g.force);
  Manifest manifest(g, "verify");

  const auto results = verify::run_properties(opt);
  std::size_t width = 0;
  for (const auto& r : results) width = std::max(width, r.name.size());
  for (const auto& r : results) {
    const char* tag = r.informational ? (r.passed ? "PASS" : "INFO") : (r.passed ? "PASS" : "FAIL");
    log << fmt::format("{:<6}{:<{}}  {}\n", tag, r.name, width, r.detail);
  }
  const bool ok = verify::all_passed(results);
  for (const auto& r : results) {
    if (!r.passed && !r.informational) log << "failed property: " << r.name << "\n";
  }
  const int code = ok ? kOk : kFailure;
  if (!g.out.empty()) {
    auto f = open_out(g.out / "verify.csv");
    CsvWriter csv(f, {"property", "status", "detail"});
    for (const auto& r : results) {
      csv.row(std::vector<std::string>{r.name,
                                       r.informational && !r.passed ? "info"
                                       : r.passed                   ? "pass"
                                                                    : "fail",
                                       r.detail});
    }
    manifest.finish(g.out, code);
  }
  return code;
}

// ---------------------------------------------------------------- linear

int cmd_linear(const GlobalOptions& g, const LinearOptions& o, std::ostream& log) {
  require_out(g, "linear");
  const auto problem = load_linear_problem(o.problem_file);
  const linear::PapConfig cfg{o.lambda1, o.lambda2, o.omega, o.k};
  try {
    cfg.validate();
  } catch (const ContractViolation& e) {
    throw UsageError(e.what());
  }
  const auto bounds = bounds_from(o.window);
  if (o.resolution < 3) throw UsageError("--resolution must be at least 3");
  prepare_output_dir(g.out, g.force);
  Manifest manifest(g, "linear");
  if (!o.problem_file.empty()) manifest.j["config_path"] = o.problem_file.string();

  const auto exact = linear::exact_solution(problem);
  const auto s1 = linear::penalty_solution(problem, o.lambda1);
  const auto s2 = linear::penalty_solution(problem, o.lambda2);
  const double anchor = linear::evaluate_objective(problem, s2);
  const linear::PapPoint origin(linear::Vector::Zero(problem.n()), linear::Vector::Zero(problem.m()));

  auto pap_min = [&](double omega, int k) {
    return linear::minimize_pap(problem, {o.lambda1, o.lambda2, omega, k}, anchor, origin);
  };

  {
    auto f = open_out(g.out / "solutions.csv");
    std::vector<std::string> header{"solution", "objective", "remainder"};
    for (auto& h : point_header(problem)) header.push_back(h);
    CsvWriter csv(f, header);
    auto row = [&](const std::string& name, const linear::PapPoint& p) {
      std::vector<std::string> cells{name};
      for (auto& c : point_cells(problem, p)) cells.push_back(c);
      csv.row(cells);
    };
    row("exact", exact);
    row("penalty_lambda1", s1);
    row("penalty_lambda2", s2);
    row("pap", pap_min(o.omega, o.k).point);
  }

  ordered_json summary;
  summary["lambda1"] = o.lambda1;
  summary["lambda2"] = o.lambda2;
  summary["omega"] = o.omega;
  summary["k"] = o.k;
  summary["anchor_objective"] = anchor;
  summary["anchor_remainder"] = linear::evaluate_remainder(problem, s2);
  const auto cond = linear::theorem_condition(problem, o.lambda1, o.lambda2);
  summary["theorem_condition"] = {{"holds", cond.holds},
                                  {"margin", cond.margin},
                                  {"constraint_image_norm", cond.constraint_image_norm}};
  try {
    const auto b = linear::omega_upper_bound(problem, o.lambda1, o.lambda2);
    summary["omega_upper_bound"] = {{"value", json_number(b.value)}, {"unbounded", b.unbounded}};
  } catch (const DomainError& e) {
    summary["omega_upper_bound"] = {{"value", nullptr}, {"error", e.what()}};
  }
  write_text(g.out / "summary.json", summary.dump(2) + "\n");
  log << fmt::format("theorem condition {} (margin {:.6g})\n", cond.holds ? "holds" : "not satisfied",
                     cond.margin);

  const bool planar = problem.n() == 1 && problem.m() == 1;
  if (!planar) {
    log << "problem is not 1x1; contour output skipped\n";
  } else {
    write_contour(g.out / "contour_penalty_lambda1.csv", linear::penalty_field(problem, o.lambda1),
                  bounds, o.resolution);
    write_contour(g.out / "contour_penalty_lambda2.csv", linear::penalty_field(problem, o.lambda2),
                  bounds, o.resolution);
    write_contour(g.out / "contour_pap.csv", linear::pap_field(problem, cfg, anchor), bounds,
                  o.resolution);
  }

  std::vector<std::pair<double, int>> sweep;
  if (o.omega_sweep) {
    for (double w : {0.1, 1.0, 10.0}) sweep.emplace_back(w, o.k);
  }
  if (o.k_sweep) {
    for (int k = 1; k <= 9; ++k) sweep.emplace_back(5.0, k);
  }
  if (!sweep.empty()) {
    auto f = open_out(g.out / "pap_minimizers.csv");
    std::vector<std::string> header{"omega", "k", "objective", "remainder"};
    for (auto& h : point_header(problem)) header.push_back(h);
    CsvWriter csv(f, header);
    std::vector<std::pair<double, int>> seen;
    for (const auto& [w, k] : sweep) {
      if (std::find(seen.begin(), seen.end(), std::make_pair(w, k)) != seen.end()) continue;
      seen.emplace_back(w, k);
      std::vector<std::string> cells{fmt_sweep_value(w), std::to_string(k)};
      for (auto& c : point_cells(problem, pap_min(w, k).point)) cells.push_back(c);
      csv.row(cells);
      if (planar) {
        write_contour(g.out / fmt::format("contour_pap_omega_{}_k_{}.csv", w, k),
                      linear::pap_field(problem, {o.lambda1, o.lambda2, w, k}, anchor), bounds,
                      o.resolution);
      }
    }
  }
  manifest.finish(g.out, kOk);
  log << "wrote " << g.out.string() << "\n";
  return kOk;
}

// ---------------------------------------------------------------- contour

int cmd_contour(const GlobalOptions& g, const ContourOptions& o, std::ostream& log) {
  require_out(g, "contour");
  const auto problem = load_linear_problem(o.problem_file);
  if (problem.n() != 1 || problem.m() != 1) throw UsageError("contours need a 1x1 problem");
  const auto bounds = bounds_from(o.window);
  if (o.resolution < 3) throw UsageError("--resolution must be at least 3");
  linear::PlaneField f;
  if (o.field == "penalty") {
    if (!(o.lambda > 0)) throw UsageError("--lambda must be positive");
    f = linear::penalty_field(problem, o.lambda);
  } else if (o.field == "objective") {
    f = linear::objective_field(problem);
  } else if (o.field == "pap") {
    const linear::PapConfig cfg{o.lambda1, o.lambda2, o.omega, o.k};
    try {
      cfg.validate();
    } catch (const ContractViolation& e) {
      throw UsageError(e.what());
    }
    const double anchor =
        linear::evaluate_objective(problem, linear::penalty_solution(problem, o.lambda2));
    f = linear::pap_field(problem, cfg, anchor);
  } else {
    throw UsageError("--field must be penalty, objective or pap");
  }
  prepare_output_dir(g.out, g.force);
  Manifest manifest(g, "contour");
  const auto field = linear::contour_grid(f, bounds, o.resolution);
  {
    auto out = open_out(g.out / "contour.csv");
    linear::write_csv(out, field);
  }
  const auto& m = field.minimum();
  log << fmt::format("minimum cell ({:.6f}, {:.6f}) value {:.9g}\n", m.u, m.y, m.value);
  manifest.finish(g.out, kOk);
  return kOk;
}

// ---------------------------------------------------------------- train

int cmd_train(const GlobalOptions& g, const TrainOptions& o, std::ostream& log) {
  require_out(g, "train");
  train::TrainerConfig config;
  try {
    config = train::load_config(o.config);
  } catch (const train::ConfigError& e) {
    throw UsageError(e.what());
  }
  if (g.seed) config.seed = *g.seed;
  if (o.epochs) config.max_epochs = *o.epochs;
  if (o.freeze_discriminator_after) config.freeze_discriminator_after = *o.freeze_discriminator_after;
  std::unique_ptr<problems::ControlProblem> problem;
  try {
    for (const auto& w : config.validate()) log << "warning: " << w << "\n";
    problem = problems::make_problem(config.problem);
  } catch (const ContractViolation& e) {
    throw UsageError(fmt::format("{}: {}", o.config.string(), e.what()));
  }
  prepare_output_dir(g.out, g.force);
  Manifest manifest(g, "train");
  manifest.j["config_path"] = o.config.string();
  manifest.j["seed"] = config.seed;
  write_text(g.out / "config.yaml", train::dump_config(config) + "\n");

  const auto setup = train::make_setup(config, *problem);
  auto state = train::init_state(config, setup);
  const auto t0 = std::chrono::steady_clock::now();
  int code = kOk;
  std::string failure;
  try {
    train::train(
        state, config, setup,
        [&](const train::TrainState& s) {
          const auto& r = s.history.back();
          if (config.mode == train::TrainMode::pan) {
            log << fmt::format("epoch {:>8}  solver {:.6e}  discriminator {:.6e}  lr {:.2e}/{:.2e}\n",
                               s.epoch, r.solver.total, r.discriminator.total, r.lr_solver,
                               r.lr_discriminator);
          } else {
            log << fmt::format("epoch {:>8}  loss {:.6e}  lr {:.2e}\n", s.epoch, r.solver.total,
                               r.lr_solver);
          }
          log.flush();
        },
        o.progress_every);
  } catch (const DivergenceError& e) {
    code = kDivergence;
    failure = e.what();
    log << "diverged: " << failure << " (writing partial outputs)\n";
  }
  train::RunSummary summary;
  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  {
    auto f = open_out(g.out / "history.csv");
    train::write_history_csv(f, state, config);
  }
  nn::save_checkpoint(g.out / "checkpoint_solver.csv", setup.solver_spec, state.solver.best_params);
  if (config.mode == train::TrainMode::pan) {
    nn::save_checkpoint(g.out / "checkpoint_discriminator.csv", setup.discriminator_spec,
                        state.discriminator.best_params);
  }
  try {
    {
      auto f = open_out(g.out / "solution.csv");
      train::write_solution_csv(f, state, config, setup);
    }
    const double wall = summary.wall_seconds;
    summary = train::summarize(state, config, setup);
    summary.wall_seconds = wall;
    auto metrics = ordered_json::parse(train::metrics_json(summary, state, config));
    metrics["diverged"] = code == kDivergence;
    write_text(g.out / "metrics.json", metrics.dump(2) + "\n");
    log << fmt::format("solver max|u error| {:.6g}  max|lap error| {:.6g}  (best epoch {})\n",
                       summary.solver.max_u_error, summary.solver.max_second_derivative_error,
                       state.solver.best_epoch);
    if (config.mode == train::TrainMode::pan) {
      log << fmt::format("discriminator max|u error| {:.6g}  max|lap error| {:.6g}\n",
                         summary.discriminator.max_u_error,
                         summary.discriminator.max_second_derivative_error);
    }
  } catch (const DivergenceError& e) {
    code = kDivergence;
    log << "evaluation at best weights failed: " << e.what() << "\n";
  }
  if (!failure.empty()) manifest.j["failure"] = failure;
  manifest.finish(g.out, code);
  return code;
}

// ---------------------------------------------------------------- compare

namespace {

struct RunRow {
  std::string dir;
  std::string problem;
  std::string mode;
  std::uint64_t seed = 0;
  // solver then discriminator
  std::vector<double> values;
};

const std::vector<std::string> kMetricKeys{"max_u_error", "max_second_derivative_error",
                                           "max_control_error", "residual_mse", "residual_max",
                                           "objective"};

double get(const ordered_json& j, const std::string& k) {
  if (!j.contains(k) || j[k].is_null()) return std::nan("");
  return j[k].get<double>();
}

}  // namespace

int cmd_compare(const GlobalOptions& g, const CompareOptions& o, std::ostream& log) {
  if (o.runs.size() < 2) throw UsageError("compare needs at least two run directories");
  std::vector<RunRow> rows;
  for (const auto& dir : o.runs) {
    std::ifstream f(dir / "metrics.json");
    if (!f) throw UsageError("no metrics.json in " + dir.string());
    ordered_json j;
    try {
      j = ordered_json::parse(f);
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(dir.string() + "/metrics.json: " + e.what());
    }
    RunRow r;
    r.dir = dir.string();
    r.problem = j.value("problem", "");
    r.mode = j.value("mode", "");
    r.seed = j.value("seed", std::uint64_t{0});
    for (const char* net : {"solver", "discriminator"}) {
      for (const auto& k : kMetricKeys) {
        r.values.push_back(j.contains(net) ? get(j[net], k) : std::nan(""));
      }
    }
    rows.push_back(std::move(r));
  }
  for (const auto& r : rows) {
    if (r.problem != rows.front().problem) {
      throw UsageError(fmt::format("runs are on different problems: {} ({}) vs {} ({})",
                                   rows.front().dir, rows.front().problem, r.dir, r.problem));
    }
  }

  std::vector<std::string> header{"run", "mode", "seed"};
  for (const char* net : {"solver", "discriminator"}) {
    for (const auto& k : kMetricKeys) header.push_back(std::string(net) + "_" + k);
  }

  auto cell = [](double v) { return std::isfinite(v) ? fmt::format("{:.4e}", v) : std::string("-"); };
  // human-readable table: solver metrics only, discriminator u/lap errors appended
  log << fmt::format("problem: {}\n", rows.front().problem);
  log << fmt::format("{:<32} {:<8} {:>5} {:>11} {:>11} {:>11} {:>11} {:>11} {:>11}\n", "run", "mode",
                     "seed", "u_err", "lap_err", "f_err", "res_mse", "res_max", "objective");
  for (const auto& r : rows) {
    log << fmt::format("{:<32} {:<8} {:>5} {:>11} {:>11} {:>11} {:>11} {:>11} {:>11}\n", r.dir,
                       r.mode, r.seed, cell(r.values[0]), cell(r.values[1]), cell(r.values[2]),
                       cell(r.values[3]), cell(r.values[4]), cell(r.values[5]));
  }

  // aggregation per mode
  std::map<std::string, std::vector<const RunRow*>> groups;
  for (const auto& r : rows) groups[r.mode].push_back(&r);
  struct Agg {
    std::string mode;
    std::size_t count;
    std::vector<double> mean, lo, hi;
  };
  std::vector<Agg> aggs;
  for (const auto& [mode, members] : groups) {
    Agg a{mode, members.size(), {}, {}, {}};
    for (std::size_t c = 0; c < header.size() - 3; ++c) {
      double sum = 0, lo = INFINITY, hi = -INFINITY;
      std::size_t n = 0;
      for (const auto* r : members) {
        const double v = r->values[c];
        if (!std::isfinite(v)) continue;
        sum += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        ++n;
      }
      a.mean.push_back(n ? sum / static_cast<double>(n) : std::nan(""));
      a.lo.push_back(n ? lo : std::nan(""));
      a.hi.push_back(n ? hi : std::nan(""));
    }
    aggs.push_back(std::move(a));
  }
  log << "\nper mode: mean [min, max]\n";
  for (const auto& a : aggs) {
    log << fmt::format("{:<8} n={}  u_err {} [{}, {}]  res_mse {} [{}, {}]\n", a.mode, a.count,
                       cell(a.mean[0]), cell(a.lo[0]), cell(a.hi[0]), cell(a.mean[3]), cell(a.lo[3]),
                       cell(a.hi[3]));
  }

  if (!g.out.empty()) {
    prepare_output_dir(g.out, g.force);
    Manifest manifest(g, "compare");
    {
      auto f = open_out(g.out / "compare.csv");
      CsvWriter csv(f, header);
      for (const auto& r : rows) {
        std::vector<std::string> cells{r.dir, r.mode, std::to_string(r.seed)};
        for (double v : r.values) cells.push_back(format_double(v));
        csv.row(cells);
      }
    }
    {
      auto f = open_out(g.out / "compare_summary.csv");
      std::vector<std::string> h{"mode", "runs", "statistic"};
      for (std::size_t c = 3; c < header.size(); ++c) h.push_back(header[c]);
      CsvWriter csv(f, h);
      for (const auto& a : aggs) {
        for (const auto& [stat, vals] : {std::pair{"mean", &a.mean}, std::pair{"min", &a.lo},
                                         std::pair{"max", &a.hi}}) {
          std::vector<std::string> cells{a.mode, std::to_string(a.count), stat};
          for (double v : *vals) cells.push_back(format_double(v));
          csv.row(cells);
        }
      }
    }
    manifest.finish(g.out, kOk);
  }
  return kOk;
}

// ---------------------------------------------------------------- dispatch

int run(int argc, char** argv, std::ostream& log, std::ostream& err) {
  CLI::App app{"Penalty adversarial networks: linear analysis, verification and training"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(PAN_VERSION_STRING));

  GlobalOptions g;
  std::uint64_t seed = 0;
  std::string out;
  auto* seed_opt = app.add_option("--seed", seed, "Random seed (overrides the config)");
  app.add_option("--out", out, "Output directory");
  app.add_flag("--force", g.force, "Allow writing into a non-empty output directory");
  for (int i = 0; i < argc; ++i) g.command_line += (i ? " " : "") + std::string(argv[i]);

  double v_l1 = 5.0, v_l2 = 0.5;
  auto* verify = app.add_subcommand("verify", "Run the property checks");
  verify->add_option("--lambda1", v_l1, "lambda1 for the existence-condition checks");
  verify->add_option("--lambda2", v_l2, "lambda2 for the existence-condition checks");

  LinearOptions lo;
  auto* lin = app.add_subcommand("linear", "Solutions, conditions and contours of a linear problem");
  lin->add_option("--problem", lo.problem_file, "YAML file with A, K, b, rho (default: toy)");
  lin->add_option("--lambda1", lo.lambda1);
  lin->add_option("--lambda2", lo.lambda2);
  lin->add_option("--omega", lo.omega);
  lin->add_option("--k", lo.k, "Power of the adversarial term");
  lin->add_flag("--omega-sweep", lo.omega_sweep, "Also emit omega in {0.1, 1, 10}");
  lin->add_flag("--k-sweep", lo.k_sweep, "Also emit k = 1..9 at omega = 5");
  lin->add_option("--window", lo.window, "u_min u_max y_min y_max")->expected(4);
  lin->add_option("--resolution", lo.resolution, "Contour lattice points per axis");

  ContourOptions co;
  auto* con = app.add_subcommand("contour", "Sample one field of a 1x1 problem on a lattice");
  con->add_option("--problem", co.problem_file);
  con->add_option("--field", co.field)->check(CLI::IsMember({"penalty", "objective", "pap"}));
  con->add_option("--lambda", co.lambda, "Penalty weight for --field penalty");
  con->add_option("--lambda1", co.lambda1);
  con->add_option("--lambda2", co.lambda2);
  con->add_option("--omega", co.omega);
  con->add_option("--k", co.k);
  con->add_option("--window", co.window)->expected(4);
  con->add_option("--resolution", co.resolution);

  TrainOptions to;
  int epochs = 0, freeze = 0;
  auto* tr = app.add_subcommand("train", "Train from a YAML config");
  tr->add_option("config", to.config, "Config file")->required()->check(CLI::ExistingFile);
  auto* ep_opt = tr->add_option("--epochs", epochs, "Override the epoch budget");
  auto* fr_opt = tr->add_option("--freeze-discriminator-after", freeze,
                                "Stop updating the discriminator after this epoch");
  tr->add_option("--progress", to.progress_every, "Print a progress line every N epochs");

  CompareOptions cmp;
  auto* cm = app.add_subcommand("compare", "Side-by-side metrics of finished runs");
  cm->add_option("runs", cmp.runs, "Run directories")->required()->expected(2, -1);

  // subcommand flags may also carry the global ones
  for (auto* sub : {verify, lin, con, tr, cm}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, log, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, log, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, log, err);
    return kUsage;
  }
  if (seed_opt->count()) g.seed = seed;
  g.out = out;
  if (ep_opt->count()) to.epochs = epochs;
  if (fr_opt->count()) to.freeze_discriminator_after = freeze;

  try {
    if (verify->parsed()) return cmd_verify(g, v_l1, v_l2, log);
    if (lin->parsed()) return cmd_linear(g, lo, log);
    if (con->parsed()) return cmd_contour(g, co, log);
    if (tr->parsed()) return cmd_train(g, to, log);
    if (cm->parsed()) return cmd_compare(g, cmp, log);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DivergenceError& e) {
    err << "diverged: " << e.what() << "\n";
    return kDivergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace pan::cli
