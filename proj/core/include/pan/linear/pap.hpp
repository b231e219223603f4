#pragma once

// Discretized linear control problem
//
//   minimize  J(u, y) = 1/2 |A u - b|^2 + rho/2 |y|^2   subject to  K u = y
//
// together with its quadratic-penalty relaxation and the penalty adversarial
// functional built from two penalty weights lambda1 > lambda2.

#include <Eigen/Dense>

#include <limits>

namespace pan::linear {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Relative smallest singular value below which A^T A + K^T K is treated as singular.
inline constexpr double kSingularityTolerance = 1e-10;

class LinearControlProblem {
 public:
  /// Throws ContractViolation on inconsistent shapes or rho <= 0, and
  /// SingularSystemError when the rows of A and K do not span R^n.
  LinearControlProblem(Matrix A, Matrix K, Vector b, double rho);

  /// The 1x1 instance  min 1/2|u - 2|^2 + 1/2|y|^2  s.t.  2u = y.
  static LinearControlProblem toy();

  const Matrix& A() const noexcept { return A_; }
  const Matrix& K() const noexcept { return K_; }
  const Vector& b() const noexcept { return b_; }
  double rho() const noexcept { return rho_; }

  Eigen::Index n() const noexcept { return A_.cols(); }
  Eigen::Index m() const noexcept { return K_.rows(); }

  /// sigma_min / sigma_max of A^T A + K^T K.
  double relative_min_singular_value() const noexcept { return span_ratio_; }

 private:
  Matrix A_;
  Matrix K_;
  Vector b_;
  double rho_;
  double span_ratio_;
};

struct PapPoint {
  Vector u;
  Vector y;

  PapPoint() = default;
  PapPoint(Vector u_, Vector y_) : u(std::move(u_)), y(std::move(y_)) {}
  PapPoint(double u_, double y_) : u(Vector::Constant(1, u_)), y(Vector::Constant(1, y_)) {}

  /// Stacked (u, y).
  Vector stacked() const;
  static PapPoint unstack(const LinearControlProblem& problem, const Vector& z);
};

struct PapConfig {
  double lambda1;
  double lambda2;
  double omega;
  int power_k = 2;

  /// Throws ContractViolation unless lambda1 > lambda2 > 0, omega > 0, power_k >= 1.
  void validate() const;
};

enum class Region { Omega1, Omega2 };

struct PapEvaluation {
  double objective;
  double remainder;
  double adversarial_value;
  double objective_gap;
  Region region;
};

double evaluate_objective(const LinearControlProblem& problem, const PapPoint& point);

/// |K u - y|^2
double evaluate_remainder(const LinearControlProblem& problem, const PapPoint& point);

/// J + lambda/2 R
double evaluate_penalty(const LinearControlProblem& problem, const PapPoint& point, double lambda);

/// Gradient of J with respect to (u, y).
Vector objective_gradient(const LinearControlProblem& problem, const PapPoint& point);
/// Gradient of R with respect to (u, y).
Vector remainder_gradient(const LinearControlProblem& problem, const PapPoint& point);
Vector penalty_gradient(const LinearControlProblem& problem, const PapPoint& point, double lambda);

/// Constrained minimizer from the Lagrangian optimality system.
PapPoint exact_solution(const LinearControlProblem& problem);

/// Unique minimizer of J + lambda/2 R.
PapPoint penalty_solution(const LinearControlProblem& problem, double lambda);

/// Hessian of the penalty functional, blocks ordered (u, y).
Matrix penalty_hessian(const LinearControlProblem& problem, double lambda);

/// anchor_objective is the objective at the anchor point (normally the lambda2
/// penalty solution); it is used as given, never recomputed here.
PapEvaluation evaluate_pap(const LinearControlProblem& problem, const PapConfig& config,
                           double anchor_objective, const PapPoint& point);

struct PapGradient {
  Vector gradient;
  /// Set when power_k == 1 and the point sits exactly on the region boundary;
  /// the returned gradient is then the Omega2 branch.
  bool nonsmooth = false;
};

PapGradient pap_gradient(const LinearControlProblem& problem, const PapConfig& config,
                         double anchor_objective, const PapPoint& point);

/// Penalty weight whose gradient direction matches the k = 2 adversarial functional
/// at a point with the given objective. Throws DomainError when objective < anchor.
double equivalent_lambda(const PapConfig& config, double objective, double anchor_objective);

struct OmegaBound {
  double value;
  /// True when J(exact) == J(lambda2 solution); value is +infinity then.
  bool unbounded = false;
};

/// Largest omega for which the exact solution still lies in the admissible band.
/// Throws DomainError when the existence condition's margin is not positive.
OmegaBound omega_upper_bound(const LinearControlProblem& problem, double lambda1, double lambda2);

struct TheoremCondition {
  bool holds;
  /// lambda1/2 R(lambda2 sol) - [J(exact) - J(lambda2 sol)]; any positive margin is a valid sigma.
  double margin;
  /// |K u^{lambda2}|
  double constraint_image_norm;
};

TheoremCondition theorem_condition(const LinearControlProblem& problem, double lambda1,
                                   double lambda2);

struct ObjectiveBand {
  double lower;
  double upper;
};

/// Objective interval on which a point with the given remainder beats the anchor's
/// adversarial value (power_k == 2 only). Equal remainders give the empty band
/// {anchor, anchor}; remainder_at_point > anchor_remainder throws DomainError.
ObjectiveBand admissible_objective_band(const PapConfig& config, double anchor_objective,
                                        double anchor_remainder, double remainder_at_point);

}  // namespace pan::linear
