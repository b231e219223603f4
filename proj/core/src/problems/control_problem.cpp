#include "pan/problems/control_problem.hpp"

#include <cmath>
#include <numbers>

#include "pan/common/error.hpp"

namespace pan::problems {

namespace {

constexpr double kPi = std::numbers::pi;

void check_dim(std::span<const double> x, std::size_t d) {
  PAN_REQUIRE(x.size() == d, "coordinate has wrong dimension");
}

}  // namespace

double ControlProblem::boundary_target(std::span<const double> /*x*/) const { return 0.0; }

double ControlProblem::initial_target(std::span<const double> /*x*/) const {
  throw UnsupportedOperation(name() + " is stationary: no initial condition");
}

// ---- Example 1 -------------------------------------------------------------

BoundaryControl1D::BoundaryControl1D() : BoundaryControl1D(Params{}) {}

BoundaryControl1D::BoundaryControl1D(const Params& p)
    : a_(p.a),
      b_(p.b_slope),
      amp_(p.amplitude == 0.0 ? 8.0 * kPi * kPi : p.amplitude),
      rho_(p.rho) {
  PAN_REQUIRE(rho_ > 0.0, "rho must be positive");
  a_star_ = a_ / (1.0 + 2.0 * rho_) + 2.0 * rho_ * b_ / ((1.0 + 2.0 * rho_) * (1.0 + 6.0 * rho_));
  b_star_ = b_ / (1.0 + 6.0 * rho_);
}

double BoundaryControl1D::desired_state(std::span<const double> x) const {
  check_dim(x, 1);
  return amp_ / (4.0 * kPi * kPi) * std::sin(2.0 * kPi * x[0]) + b_ * x[0] + a_;
}

double BoundaryControl1D::analytic_solution(std::span<const double> x) const {
  check_dim(x, 1);
  return amp_ / (4.0 * kPi * kPi) * std::sin(2.0 * kPi * x[0]) + b_star_ * x[0] + a_star_;
}

double BoundaryControl1D::analytic_control(std::span<const double> /*x*/) const {
  throw UnsupportedOperation("boundary control has no distributed control field");
}

std::vector<double> BoundaryControl1D::analytic_hessian_diag(std::span<const double> x) const {
  check_dim(x, 1);
  return {-amp_ * std::sin(2.0 * kPi * x[0])};
}

double BoundaryControl1D::pde_residual(std::span<const double> x, double /*value*/,
                                       std::span<const double> hess,
                                       double /*control_value*/) const {
  check_dim(x, 1);
  check_dim(hess, 1);
  return hess[0] + amp_ * std::sin(2.0 * kPi * x[0]);
}

ResidualPartials BoundaryControl1D::pde_residual_partials(std::span<const double> /*x*/,
                                                          double /*value*/,
                                                          std::span<const double> /*hess*/,
                                                          double /*control_value*/) const {
  return {0.0, {1.0}, 0.0};
}

SampleSet BoundaryControl1D::sample_grid(int n, int /*n_boundary*/) const {
  PAN_REQUIRE(n >= 2, "need at least two grid points");
  SampleSet s;
  s.n = n;
  s.collocation.resize(1, n);
  for (int m = 0; m < n; ++m) s.collocation(0, m) = static_cast<double>(m) / (n - 1);
  s.control.resize(1, 2);
  s.control << 0.0, 1.0;
  return s;
}

Eigen::MatrixXd BoundaryControl1D::evaluation_grid() const {
  constexpr int kPoints = 201;
  Eigen::MatrixXd g(1, kPoints);
  for (int i = 0; i < kPoints; ++i) g(0, i) = static_cast<double>(i) / (kPoints - 1);
  return g;
}

double BoundaryControl1D::continuous_objective(double u0, double u1) const {
  // u = amp/(4 pi^2) sin(2 pi x) + p x + q, so u - u_d = (p - b) x + (q - a)
  const double p = (u1 - u0) - b_;
  const double q = u0 - a_;
  const double misfit = p * p / 3.0 + p * q + q * q;
  return 0.5 * misfit + 0.5 * rho_ * (u0 * u0 + u1 * u1);
}

// ---- 2D shared ---------------------------------------------------------------

SampleSet DistributedControl2D::sample_grid(int n, int n_boundary) const {
  PAN_REQUIRE(n >= 2, "need at least two grid points per axis");
  PAN_REQUIRE(n_boundary >= 4 && n_boundary % 4 == 0, "boundary count must be a positive multiple of 4");
  SampleSet s;
  s.n = n;
  s.n_boundary = n_boundary;
  s.collocation.resize(2, Eigen::Index(n) * n);
  for (int m = 1; m <= n; ++m) {
    for (int k = 1; k <= n; ++k) {
      const Eigen::Index c = Eigen::Index(m - 1) * n + (k - 1);
      s.collocation(0, c) = static_cast<double>(m) / (n + 1);
      s.collocation(1, c) = static_cast<double>(k) / (n + 1);
    }
  }
  const int per_edge = n_boundary / 4;
  s.boundary.resize(2, n_boundary);
  for (int i = 0; i < per_edge; ++i) {
    const double t = static_cast<double>(i + 1) / (per_edge + 1);
    s.boundary.col(i) << t, 0.0;                 // bottom
    s.boundary.col(per_edge + i) << 1.0, t;      // right
    s.boundary.col(2 * per_edge + i) << t, 1.0;  // top
    s.boundary.col(3 * per_edge + i) << 0.0, t;  // left
  }
  return s;
}

Eigen::MatrixXd DistributedControl2D::evaluation_grid() const {
  constexpr int kPoints = 51;
  Eigen::MatrixXd g(2, kPoints * kPoints);
  for (int i = 0; i < kPoints; ++i) {
    for (int j = 0; j < kPoints; ++j) {
      g(0, i * kPoints + j) = static_cast<double>(i) / (kPoints - 1);
      g(1, i * kPoints + j) = static_cast<double>(j) / (kPoints - 1);
    }
  }
  return g;
}

// ---- Example 2 ---------------------------------------------------------------

namespace {
double sin_sin(std::span<const double> x, double freq) {
  return std::sin(freq * kPi * x[0]) * std::sin(freq * kPi * x[1]);
}
}  // namespace

DistributedControl2DPoisson::DistributedControl2DPoisson(double amplitude, double rho)
    : amp_(amplitude), rho_(rho) {
  PAN_REQUIRE(rho_ > 0.0, "rho must be positive");
}

double DistributedControl2DPoisson::desired_state(std::span<const double> x) const {
  check_dim(x, 2);
  return amp_ * sin_sin(x, 1.0);
}

double DistributedControl2DPoisson::analytic_solution(std::span<const double> x) const {
  check_dim(x, 2);
  return scale() * sin_sin(x, 1.0);
}

double DistributedControl2DPoisson::analytic_control(std::span<const double> x) const {
  check_dim(x, 2);
  return 2.0 * kPi * kPi * scale() * sin_sin(x, 1.0);
}

std::vector<double> DistributedControl2DPoisson::analytic_hessian_diag(
    std::span<const double> x) const {
  const double v = -kPi * kPi * analytic_solution(x);
  return {v, v};
}

double DistributedControl2DPoisson::pde_residual(std::span<const double> x, double /*value*/,
                                                 std::span<const double> hess,
                                                 double control_value) const {
  check_dim(x, 2);
  check_dim(hess, 2);
  return hess[0] + hess[1] + control_value;
}

ResidualPartials DistributedControl2DPoisson::pde_residual_partials(
    std::span<const double> /*x*/, double /*value*/, std::span<const double> /*hess*/,
    double /*control_value*/) const {
  return {0.0, {1.0, 1.0}, 1.0};
}

// ---- Example 3 ---------------------------------------------------------------

DistributedControl2DAllenCahn::DistributedControl2DAllenCahn(double epsilon, double alpha,
                                                             double beta, double rho)
    : eps_(epsilon), alpha_(alpha), beta_(beta), rho_(rho) {
  PAN_REQUIRE(eps_ > 0.0, "epsilon must be positive");
  PAN_REQUIRE(rho_ >= 0.0, "rho must be non-negative");
}

DistributedControl2DAllenCahn::Fields DistributedControl2DAllenCahn::fields(
    std::span<const double> x) const {
  check_dim(x, 2);
  const double sx1 = std::sin(kPi * x[0]), cx1 = std::cos(kPi * x[0]);
  const double sy1 = std::sin(kPi * x[1]), cy1 = std::cos(kPi * x[1]);
  const double sx2 = std::sin(2 * kPi * x[0]), cx2 = std::cos(2 * kPi * x[0]);
  const double sy2 = std::sin(2 * kPi * x[1]), cy2 = std::cos(2 * kPi * x[1]);
  const double s1 = sx1 * sy1;
  const double s2 = sx2 * sy2;
  const double pi2 = kPi * kPi;
  Fields f{};
  f.u = alpha_ * s1 + beta_ * s2;
  f.ux = alpha_ * kPi * cx1 * sy1 + 2.0 * beta_ * kPi * cx2 * sy2;
  f.uy = alpha_ * kPi * sx1 * cy1 + 2.0 * beta_ * kPi * sx2 * cy2;
  // sin(k pi x) sin(k pi y) is an eigenfunction: Laplacian -2 k^2 pi^2, bilaplacian 4 k^4 pi^4
  f.lap = -2.0 * pi2 * alpha_ * s1 - 8.0 * pi2 * beta_ * s2;
  f.bilap = 4.0 * pi2 * pi2 * alpha_ * s1 + 64.0 * pi2 * pi2 * beta_ * s2;
  return f;
}

double DistributedControl2DAllenCahn::desired_state(std::span<const double> x) const {
  const Fields f = fields(x);
  const double e2 = eps_ * eps_;
  const double grad2 = f.ux * f.ux + f.uy * f.uy;
  const double nonlinear = (f.u * f.u * f.u - f.u) / e2;
  // u_d = u - rho Lap(f) + rho g'(u) f  with f = -Lap u + g(u), g(u) = (u^3 - u)/eps^2
  return f.u + rho_ * f.bilap - 3.0 * rho_ / e2 * f.u * f.u * f.lap -
         rho_ / e2 * (6.0 * f.u * grad2 - f.lap) -
         rho_ / e2 * (f.lap - nonlinear) * (3.0 * f.u * f.u - 1.0);
}

double DistributedControl2DAllenCahn::analytic_solution(std::span<const double> x) const {
  return fields(x).u;
}

double DistributedControl2DAllenCahn::analytic_control(std::span<const double> x) const {
  const Fields f = fields(x);
  return -f.lap + (f.u * f.u * f.u - f.u) / (eps_ * eps_);
}

std::vector<double> DistributedControl2DAllenCahn::analytic_hessian_diag(
    std::span<const double> x) const {
  check_dim(x, 2);
  const double pi2 = kPi * kPi;
  const double s1 = sin_sin(x, 1.0);
  const double s2 = sin_sin(x, 2.0);
  // symmetric in x and y
  const double v = -pi2 * alpha_ * s1 - 4.0 * pi2 * beta_ * s2;
  return {v, v};
}

double DistributedControl2DAllenCahn::pde_residual(std::span<const double> x, double value,
                                                   std::span<const double> hess,
                                                   double control_value) const {
  check_dim(x, 2);
  check_dim(hess, 2);
  return hess[0] + hess[1] - (value * value * value - value) / (eps_ * eps_) + control_value;
}

ResidualPartials DistributedControl2DAllenCahn::pde_residual_partials(
    std::span<const double> /*x*/, double value, std::span<const double> /*hess*/,
    double /*control_value*/) const {
  return {-(3.0 * value * value - 1.0) / (eps_ * eps_), {1.0, 1.0}, 1.0};
}

// ---- registry ----------------------------------------------------------------

std::unique_ptr<ControlProblem> make_problem(const std::string& name) {
  if (name == "poisson1d-boundary") return std::make_unique<BoundaryControl1D>();
  if (name == "poisson2d-distributed") return std::make_unique<DistributedControl2DPoisson>();
  if (name == "allen-cahn-2d") return std::make_unique<DistributedControl2DAllenCahn>();
  throw ContractViolation("unknown problem '" + name + "'");
}

std::vector<std::string> problem_names() {
  return {"poisson1d-boundary", "poisson2d-distributed", "allen-cahn-2d"};
}

}  // namespace pan::problems
