#include "pan/linear/search.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "pan/common/csv.hpp"
#include "pan/common/error.hpp"

namespace pan::linear {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
}

DescentResult minimize_pap(const LinearControlProblem& problem, const PapConfig& config,
                           double anchor_objective, const PapPoint& init,
                           const DescentOptions& options) {
  config.validate();
  PAN_REQUIRE(options.max_iterations >= 0, "max_iterations must be non-negative");
  PAN_REQUIRE(options.backtrack_factor > 0.0 && options.backtrack_factor < 1.0,
              "backtrack factor must lie in (0, 1)");

  auto value_at = [&](const Vector& z) {
    return evaluate_pap(problem, config, anchor_objective, PapPoint::unstack(problem, z))
        .adversarial_value;
  };
  auto gradient_at = [&](const Vector& z) {
    return pap_gradient(problem, config, anchor_objective, PapPoint::unstack(problem, z))
        .gradient;
  };

  Vector z = init.stacked();
  double f = value_at(z);
  Vector g = gradient_at(z);
  if (!std::isfinite(f) || !g.allFinite()) throw DivergenceError("non-finite initial point");

  int it = 0;
  for (; it < options.max_iterations; ++it) {
    const double gnorm2 = g.squaredNorm();
    if (std::sqrt(gnorm2) < options.gradient_tolerance) break;

    double step = options.initial_step;
    Vector trial;
    double f_trial = 0.0;
    bool accepted = false;
    Vector g_trial;
    for (int b = 0; b < options.max_backtracks; ++b) {
      trial = z - step * g;
      f_trial = value_at(trial);
      if (!std::isfinite(f_trial)) throw DivergenceError("non-finite value during descent");
      // near the minimum the predicted decrease drops below the rounding noise of f;
      // judge the step by the gradient norm there
      const double noise = 16 * kEps * std::max(1.0, std::abs(f));
      if (std::abs(f_trial - f) <= noise) {
        g_trial = gradient_at(trial);
        if (g_trial.squaredNorm() < gnorm2) {
          accepted = true;
          break;
        }
        g_trial.resize(0);
      } else if (f_trial <= f - options.armijo_c * step * gnorm2) {
        accepted = true;
        break;
      }
      step *= options.backtrack_factor;
    }
    // No sufficient decrease at machine-precision step sizes: we are at the floor.
    if (!accepted) break;

    z = std::move(trial);
    f = f_trial;
    g = g_trial.size() ? std::move(g_trial) : gradient_at(z);
    if (!g.allFinite()) throw DivergenceError("non-finite gradient during descent");
  }

  DescentResult result{PapPoint::unstack(problem, z), f, g.norm(), it, false};
  result.converged = result.gradient_norm < options.gradient_tolerance;
  return result;
}

namespace {

double lattice(double lo, double hi, int i, int resolution) {
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(resolution - 1);
}

void check_grid(const PlaneBounds& bounds, int resolution) {
  PAN_REQUIRE(resolution >= 3, "grid resolution must be at least 3");
  PAN_REQUIRE(bounds.u_max > bounds.u_min && bounds.y_max > bounds.y_min, "empty bounds");
}

bool before(double value, double u, double y, double best_value, double best_u, double best_y) {
  if (value != best_value) return value < best_value;
  if (u != best_u) return u < best_u;
  return y < best_y;
}

}  // namespace

GridMinimum grid_minimize(const PlaneField& f, const PlaneBounds& bounds, int resolution) {
  check_grid(bounds, resolution);
  GridMinimum best{0.0, 0.0, std::numeric_limits<double>::infinity()};
  bool first = true;
  for (int i = 0; i < resolution; ++i) {
    const double u = lattice(bounds.u_min, bounds.u_max, i, resolution);
    for (int j = 0; j < resolution; ++j) {
      const double y = lattice(bounds.y_min, bounds.y_max, j, resolution);
      const double v = f(u, y);
      if (!std::isfinite(v)) throw DomainError("non-finite field value in grid search");
      if (first || before(v, u, y, best.value, best.u, best.y)) {
        best = {u, y, v};
        first = false;
      }
    }
  }
  return best;
}

ContourField contour_grid(const PlaneField& f, const PlaneBounds& bounds, int resolution) {
  check_grid(bounds, resolution);
  ContourField field{resolution, bounds, {}};
  field.samples.reserve(static_cast<std::size_t>(resolution) * resolution);
  for (int j = 0; j < resolution; ++j) {
    const double y = lattice(bounds.y_min, bounds.y_max, j, resolution);
    for (int i = 0; i < resolution; ++i) {
      const double u = lattice(bounds.u_min, bounds.u_max, i, resolution);
      field.samples.push_back({u, y, f(u, y)});
    }
  }
  return field;
}

const ContourSample& ContourField::minimum() const {
  PAN_REQUIRE(!samples.empty(), "empty contour field");
  const ContourSample* best = &samples.front();
  for (const auto& s : samples) {
    if (before(s.value, s.u, s.y, best->value, best->u, best->y)) best = &s;
  }
  return *best;
}

void write_csv(std::ostream& out, const ContourField& field) {
  CsvWriter csv(out, {"u", "y", "value"});
  for (const auto& s : field.samples) csv.row(std::vector<double>{s.u, s.y, s.value});
}

void write_csv(std::ostream& out, const GridMinimum& minimum) {
  CsvWriter csv(out, {"u", "y", "value"});
  csv.row(std::vector<double>{minimum.u, minimum.y, minimum.value});
}

namespace {

// Scalar coefficients of a 1x1 problem; avoids heap traffic in 4M-point grid scans.
struct ScalarProblem {
  double a, k, b, rho;

  explicit ScalarProblem(const LinearControlProblem& problem) {
    PAN_REQUIRE(problem.n() == 1 && problem.m() == 1, "plane fields need a 1x1 problem");
    a = problem.A()(0, 0);
    k = problem.K()(0, 0);
    b = problem.b()(0);
    rho = problem.rho();
  }

  double objective(double u, double y) const {
    const double r = a * u - b;
    return 0.5 * r * r + 0.5 * rho * y * y;
  }
  double remainder(double u, double y) const {
    const double d = k * u - y;
    return d * d;
  }
};

}  // namespace

PlaneField penalty_field(const LinearControlProblem& problem, double lambda) {
  PAN_REQUIRE(lambda > 0.0, "penalty weight must be positive");
  const ScalarProblem p(problem);
  return [p, lambda](double u, double y) {
    return p.objective(u, y) + 0.5 * lambda * p.remainder(u, y);
  };
}

PlaneField objective_field(const LinearControlProblem& problem) {
  const ScalarProblem p(problem);
  return [p](double u, double y) { return p.objective(u, y); };
}

PlaneField pap_field(const LinearControlProblem& problem, const PapConfig& config,
                     double anchor_objective) {
  const ScalarProblem p(problem);
  return [p, config, anchor_objective](double u, double y) {
    const double j = p.objective(u, y);
    const double gap = j - anchor_objective;
    double value = j + 0.5 * config.lambda1 * p.remainder(u, y);
    if (gap > 0.0) value += config.omega * std::pow(gap, config.power_k);
    return value;
  };
}

}  // namespace pan::linear
