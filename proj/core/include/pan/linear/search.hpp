#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "pan/linear/pap.hpp"

namespace pan::linear {

struct DescentOptions {
  int max_iterations = 50000;
  double gradient_tolerance = 1e-10;
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;
  double initial_step = 1.0;
  int max_backtracks = 60;
};

struct DescentResult {
  PapPoint point;
  double value;
  double gradient_norm;
  int iterations;
  bool converged;
};

/// Gradient descent with Armijo backtracking on the adversarial functional.
/// Throws DivergenceError on non-finite iterates.
DescentResult minimize_pap(const LinearControlProblem& problem, const PapConfig& config,
                           double anchor_objective, const PapPoint& init,
                           const DescentOptions& options = {});

/// Scalar field over the (u, y) plane of a 1x1 problem.
using PlaneField = std::function<double(double u, double y)>;

struct PlaneBounds {
  double u_min, u_max;
  double y_min, y_max;
};

struct GridMinimum {
  double u;
  double y;
  double value;
};

/// Brute-force minimum over a uniform resolution x resolution lattice including the
/// bounds. Ties go to the lexicographically smallest (u, y).
GridMinimum grid_minimize(const PlaneField& f, const PlaneBounds& bounds, int resolution);

struct ContourSample {
  double u;
  double y;
  double value;
};

/// Row-major samples: y is the slow index, u the fast one.
struct ContourField {
  int resolution;
  PlaneBounds bounds;
  std::vector<ContourSample> samples;

  /// Sample with minimal value (same tie rule as grid_minimize).
  const ContourSample& minimum() const;
};

ContourField contour_grid(const PlaneField& f, const PlaneBounds& bounds, int resolution);

/// CSV with header `u,y,value`.
void write_csv(std::ostream& out, const ContourField& field);
void write_csv(std::ostream& out, const GridMinimum& minimum);

/// Fields over the toy (1x1) problem, for grids and contours.
PlaneField penalty_field(const LinearControlProblem& problem, double lambda);
PlaneField objective_field(const LinearControlProblem& problem);
PlaneField pap_field(const LinearControlProblem& problem, const PapConfig& config,
                     double anchor_objective);

}  // namespace pan::linear
