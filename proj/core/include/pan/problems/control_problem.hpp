#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace pan::problems {

/// Coordinates are stored one point per column (spatial_dim x count).
struct SampleSet {
  Eigen::MatrixXd collocation;  // objective and PDE residual points
  Eigen::MatrixXd boundary;     // boundary-loss points (may be empty)
  Eigen::MatrixXd control;      // boundary-control evaluation points (1D only, may be empty)
  Eigen::MatrixXd initial;      // initial-condition points (may be empty)
  int n = 0;
  int n_boundary = 0;
};

enum class ControlKind {
  boundary,     // control = network values at `control` points; J carries rho/2 * sum u^2 there
  distributed,  // control = second network output f on the collocation points
};

/// Partial derivatives of a pointwise residual r(u, u_xx.., f) for the reverse sweep.
struct ResidualPartials {
  double d_value = 0.0;
  std::vector<double> d_hessian;  // per coordinate
  double d_control = 0.0;
};

class ControlProblem {
 public:
  virtual ~ControlProblem() = default;

  virtual std::string name() const = 0;
  virtual int spatial_dim() const = 0;
  virtual ControlKind control_kind() const = 0;
  /// Network outputs: u only for boundary control, (u, f) for distributed control.
  int output_dim() const { return control_kind() == ControlKind::distributed ? 2 : 1; }
  virtual double rho() const = 0;

  virtual double desired_state(std::span<const double> x) const = 0;
  virtual double analytic_solution(std::span<const double> x) const = 0;
  /// Throws UnsupportedOperation for boundary control.
  virtual double analytic_control(std::span<const double> x) const = 0;
  /// Pure second derivatives of the analytic solution, one per coordinate.
  virtual std::vector<double> analytic_hessian_diag(std::span<const double> x) const = 0;

  /// Signed residual as it appears inside the squared PDE loss.
  virtual double pde_residual(std::span<const double> x, double value,
                              std::span<const double> hessian_diag,
                              double control_value) const = 0;
  virtual ResidualPartials pde_residual_partials(std::span<const double> x, double value,
                                                 std::span<const double> hessian_diag,
                                                 double control_value) const = 0;

  /// Target value of u on boundary-loss points.
  virtual double boundary_target(std::span<const double> x) const;
  /// Target value of u on initial-condition points; unsupported for stationary problems.
  virtual double initial_target(std::span<const double> x) const;

  virtual SampleSet sample_grid(int n, int n_boundary) const = 0;
  /// Dense evaluation grid for error metrics (includes the closed boundary).
  virtual Eigen::MatrixXd evaluation_grid() const = 0;
};

/// Example 1: -u'' = A sin(2 pi x) on [0,1], controlled through u(0), u(1).
class BoundaryControl1D final : public ControlProblem {
 public:
  struct Params {
    double a = -10.0;
    double b_slope = 65.0;
    double amplitude = 0.0;  // 0 selects 8 pi^2
    double rho = 2.0;
  };

  BoundaryControl1D();
  explicit BoundaryControl1D(const Params& p);

  double a() const noexcept { return a_; }
  double b_slope() const noexcept { return b_; }
  double amplitude() const noexcept { return amp_; }
  double a_star() const noexcept { return a_star_; }
  double b_star() const noexcept { return b_star_; }

  std::string name() const override { return "poisson1d-boundary"; }
  int spatial_dim() const override { return 1; }
  ControlKind control_kind() const override { return ControlKind::boundary; }
  double rho() const override { return rho_; }
  double desired_state(std::span<const double> x) const override;
  double analytic_solution(std::span<const double> x) const override;
  double analytic_control(std::span<const double> x) const override;
  std::vector<double> analytic_hessian_diag(std::span<const double> x) const override;
  double pde_residual(std::span<const double> x, double value, std::span<const double> hess,
                      double control_value) const override;
  ResidualPartials pde_residual_partials(std::span<const double> x, double value,
                                         std::span<const double> hess,
                                         double control_value) const override;
  SampleSet sample_grid(int n, int n_boundary) const override;
  Eigen::MatrixXd evaluation_grid() const override;

  /// J of the ODE solution with boundary values (u0, u1), integral in closed form.
  double continuous_objective(double u0, double u1) const;

 private:
  double a_, b_, amp_, rho_, a_star_, b_star_;
};

/// Shared 2D machinery: unit square, homogeneous Dirichlet boundary, distributed control.
class DistributedControl2D : public ControlProblem {
 public:
  int spatial_dim() const override { return 2; }
  ControlKind control_kind() const override { return ControlKind::distributed; }
  SampleSet sample_grid(int n, int n_boundary) const override;
  Eigen::MatrixXd evaluation_grid() const override;
};

/// Example 2: -Laplace(u) = f.
class DistributedControl2DPoisson final : public DistributedControl2D {
 public:
  explicit DistributedControl2DPoisson(double amplitude = 10.0, double rho = 0.01);

  double amplitude() const noexcept { return amp_; }
  double scale() const noexcept { return amp_ / (1.0 + 4.0 * rho_ * std::pow(std::numbers::pi, 4)); }

  std::string name() const override { return "poisson2d-distributed"; }
  double rho() const override { return rho_; }
  double desired_state(std::span<const double> x) const override;
  double analytic_solution(std::span<const double> x) const override;
  double analytic_control(std::span<const double> x) const override;
  std::vector<double> analytic_hessian_diag(std::span<const double> x) const override;
  double pde_residual(std::span<const double> x, double value, std::span<const double> hess,
                      double control_value) const override;
  ResidualPartials pde_residual_partials(std::span<const double> x, double value,
                                         std::span<const double> hess,
                                         double control_value) const override;

 private:
  double amp_, rho_;
};

/// Example 3: -Laplace(u) + (u^3 - u)/eps^2 = f.
class DistributedControl2DAllenCahn final : public DistributedControl2D {
 public:
  explicit DistributedControl2DAllenCahn(double epsilon = 0.4, double alpha = 0.45,
                                         double beta = 0.55, double rho = 1e-4);

  double epsilon() const noexcept { return eps_; }

  std::string name() const override { return "allen-cahn-2d"; }
  double rho() const override { return rho_; }
  double desired_state(std::span<const double> x) const override;
  double analytic_solution(std::span<const double> x) const override;
  double analytic_control(std::span<const double> x) const override;
  std::vector<double> analytic_hessian_diag(std::span<const double> x) const override;
  double pde_residual(std::span<const double> x, double value, std::span<const double> hess,
                      double control_value) const override;
  ResidualPartials pde_residual_partials(std::span<const double> x, double value,
                                         std::span<const double> hess,
                                         double control_value) const override;

 private:
  struct Fields {
    double u, ux, uy, lap, bilap;
  };
  Fields fields(std::span<const double> x) const;

  double eps_, alpha_, beta_, rho_;
};

/// Names: poisson1d-boundary, poisson2d-distributed, allen-cahn-2d.
std::unique_ptr<ControlProblem> make_problem(const std::string& name);
std::vector<std::string> problem_names();

}  // namespace pan::problems
