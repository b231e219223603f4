#include "pan/linear/pap.hpp"

#include <cmath>
#include <string>

#include "pan/common/error.hpp"

namespace pan::linear {

namespace {

void check_point(const LinearControlProblem& problem, const PapPoint& point) {
  PAN_REQUIRE(point.u.size() == problem.n(), "point u has wrong dimension");
  PAN_REQUIRE(point.y.size() == problem.m(), "point y has wrong dimension");
}

Vector constraint_defect(const LinearControlProblem& problem, const PapPoint& point) {
  return problem.K() * point.u - point.y;
}

Vector solve_spd(const Matrix& G, const Vector& rhs) {
  Eigen::LDLT<Matrix> ldlt(G);
  if (ldlt.info() != Eigen::Success) {
    throw SingularSystemError("LDLT factorization failed", 0.0);
  }
  return ldlt.solve(rhs);
}

}  // namespace

LinearControlProblem::LinearControlProblem(Matrix A, Matrix K, Vector b, double rho)
    : A_(std::move(A)), K_(std::move(K)), b_(std::move(b)), rho_(rho), span_ratio_(0.0) {
  PAN_REQUIRE(rho_ > 0.0, "rho must be positive");
  PAN_REQUIRE(A_.cols() > 0 && A_.rows() > 0, "A must be non-empty");
  PAN_REQUIRE(K_.rows() > 0, "K must have at least one row");
  PAN_REQUIRE(K_.cols() == A_.cols(), "A and K must have the same number of columns");
  PAN_REQUIRE(K_.rows() <= K_.cols(), "need m <= n");
  PAN_REQUIRE(b_.size() == A_.rows(), "b must have as many entries as A has rows");

  const Matrix G = A_.transpose() * A_ + K_.transpose() * K_;
  Eigen::JacobiSVD<Matrix> svd(G);
  const auto& sv = svd.singularValues();
  const double largest = sv(0);
  const double smallest = sv(sv.size() - 1);
  span_ratio_ = largest > 0.0 ? smallest / largest : 0.0;
  if (!(span_ratio_ > kSingularityTolerance)) {
    throw SingularSystemError("rows of A and K do not span R^n (sigma_min/sigma_max = " +
                                  std::to_string(span_ratio_) + ")",
                              span_ratio_);
  }
}

LinearControlProblem LinearControlProblem::toy() {
  return LinearControlProblem(Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, 2.0),
                              Vector::Constant(1, 2.0), 1.0);
}

Vector PapPoint::stacked() const {
  Vector z(u.size() + y.size());
  z << u, y;
  return z;
}

PapPoint PapPoint::unstack(const LinearControlProblem& problem, const Vector& z) {
  PAN_REQUIRE(z.size() == problem.n() + problem.m(), "stacked vector has wrong dimension");
  return {z.head(problem.n()), z.tail(problem.m())};
}

void PapConfig::validate() const {
  PAN_REQUIRE(lambda2 > 0.0, "lambda2 must be positive");
  PAN_REQUIRE(lambda1 > lambda2, "lambda1 must exceed lambda2");
  PAN_REQUIRE(omega > 0.0, "omega must be positive");
  PAN_REQUIRE(power_k >= 1, "power_k must be at least 1");
}

double evaluate_objective(const LinearControlProblem& problem, const PapPoint& point) {
  check_point(problem, point);
  const Vector misfit = problem.A() * point.u - problem.b();
  return 0.5 * misfit.squaredNorm() + 0.5 * problem.rho() * point.y.squaredNorm();
}

double evaluate_remainder(const LinearControlProblem& problem, const PapPoint& point) {
  check_point(problem, point);
  return constraint_defect(problem, point).squaredNorm();
}

double evaluate_penalty(const LinearControlProblem& problem, const PapPoint& point, double lambda) {
  PAN_REQUIRE(lambda > 0.0, "penalty weight must be positive");
  return evaluate_objective(problem, point) + 0.5 * lambda * evaluate_remainder(problem, point);
}

Vector objective_gradient(const LinearControlProblem& problem, const PapPoint& point) {
  check_point(problem, point);
  Vector g(problem.n() + problem.m());
  g.head(problem.n()) = problem.A().transpose() * (problem.A() * point.u - problem.b());
  g.tail(problem.m()) = problem.rho() * point.y;
  return g;
}

Vector remainder_gradient(const LinearControlProblem& problem, const PapPoint& point) {
  check_point(problem, point);
  const Vector defect = constraint_defect(problem, point);
  Vector g(problem.n() + problem.m());
  g.head(problem.n()) = 2.0 * problem.K().transpose() * defect;
  g.tail(problem.m()) = -2.0 * defect;
  return g;
}

Vector penalty_gradient(const LinearControlProblem& problem, const PapPoint& point, double lambda) {
  PAN_REQUIRE(lambda > 0.0, "penalty weight must be positive");
  return objective_gradient(problem, point) + 0.5 * lambda * remainder_gradient(problem, point);
}

PapPoint exact_solution(const LinearControlProblem& problem) {
  const Matrix& A = problem.A();
  const Matrix& K = problem.K();
  const Matrix G = A.transpose() * A + problem.rho() * K.transpose() * K;
  Vector u = solve_spd(G, A.transpose() * problem.b());
  Vector y = K * u;
  return {std::move(u), std::move(y)};
}

PapPoint penalty_solution(const LinearControlProblem& problem, double lambda) {
  PAN_REQUIRE(lambda > 0.0, "penalty weight must be positive");
  const Matrix& A = problem.A();
  const Matrix& K = problem.K();
  const double rho = problem.rho();
  const double effective = rho * lambda / (rho + lambda);
  const Matrix G = A.transpose() * A + effective * K.transpose() * K;
  Vector u = solve_spd(G, A.transpose() * problem.b());
  Vector y = (lambda / (rho + lambda)) * (K * u);
  return {std::move(u), std::move(y)};
}

Matrix penalty_hessian(const LinearControlProblem& problem, double lambda) {
  PAN_REQUIRE(lambda > 0.0, "penalty weight must be positive");
  const auto n = problem.n();
  const auto m = problem.m();
  const Matrix& A = problem.A();
  const Matrix& K = problem.K();
  Matrix H(n + m, n + m);
  H.topLeftCorner(n, n) = A.transpose() * A + lambda * K.transpose() * K;
  H.topRightCorner(n, m) = -lambda * K.transpose();
  H.bottomLeftCorner(m, n) = -lambda * K;
  H.bottomRightCorner(m, m) = (problem.rho() + lambda) * Matrix::Identity(m, m);
  return H;
}

PapEvaluation evaluate_pap(const LinearControlProblem& problem, const PapConfig& config,
                           double anchor_objective, const PapPoint& point) {
  PapEvaluation e{};
  e.objective = evaluate_objective(problem, point);
  e.remainder = evaluate_remainder(problem, point);
  e.objective_gap = e.objective - anchor_objective;
  e.region = e.objective_gap > 0.0 ? Region::Omega1 : Region::Omega2;
  e.adversarial_value = e.objective + 0.5 * config.lambda1 * e.remainder;
  if (e.region == Region::Omega1) {
    e.adversarial_value += config.omega * std::pow(e.objective_gap, config.power_k);
  }
  return e;
}

PapGradient pap_gradient(const LinearControlProblem& problem, const PapConfig& config,
                         double anchor_objective, const PapPoint& point) {
  const Vector grad_j = objective_gradient(problem, point);
  const Vector grad_r = remainder_gradient(problem, point);
  const double gap = evaluate_objective(problem, point) - anchor_objective;

  PapGradient out;
  double scale = 1.0;
  if (gap > 0.0) {
    scale += config.omega * config.power_k * std::pow(gap, config.power_k - 1);
  } else if (gap == 0.0 && config.power_k == 1) {
    out.nonsmooth = true;
  }
  out.gradient = scale * grad_j + 0.5 * config.lambda1 * grad_r;
  return out;
}

double equivalent_lambda(const PapConfig& config, double objective, double anchor_objective) {
  PAN_REQUIRE(config.power_k == 2, "equivalent lambda is defined for power_k == 2");
  if (objective < anchor_objective) {
    throw DomainError("equivalent lambda is only defined where J >= anchor objective");
  }
  return config.lambda1 / (1.0 + 2.0 * config.omega * (objective - anchor_objective));
}

OmegaBound omega_upper_bound(const LinearControlProblem& problem, double lambda1, double lambda2) {
  PAN_REQUIRE(lambda1 > lambda2 && lambda2 > 0.0, "need lambda1 > lambda2 > 0");
  const PapPoint exact = exact_solution(problem);
  const PapPoint anchor = penalty_solution(problem, lambda2);
  const double gap = evaluate_objective(problem, exact) - evaluate_objective(problem, anchor);
  const double numerator = lambda1 * evaluate_remainder(problem, anchor) - 2.0 * gap;
  if (!(numerator > 0.0)) {
    throw DomainError("existence condition fails: lambda1 R(anchor) - 2 gap = " +
                      std::to_string(numerator));
  }
  if (gap == 0.0) {
    return {std::numeric_limits<double>::infinity(), true};
  }
  return {numerator / (2.0 * gap * gap), false};
}

TheoremCondition theorem_condition(const LinearControlProblem& problem, double lambda1,
                                   double lambda2) {
  PAN_REQUIRE(lambda1 > lambda2 && lambda2 > 0.0, "need lambda1 > lambda2 > 0");
  const PapPoint exact = exact_solution(problem);
  const PapPoint anchor = penalty_solution(problem, lambda2);
  TheoremCondition c{};
  c.constraint_image_norm = (problem.K() * anchor.u).norm();
  c.margin = 0.5 * lambda1 * evaluate_remainder(problem, anchor) -
             (evaluate_objective(problem, exact) - evaluate_objective(problem, anchor));
  c.holds = c.constraint_image_norm > 1e-12 && c.margin > 0.0;
  return c;
}

ObjectiveBand admissible_objective_band(const PapConfig& config, double anchor_objective,
                                        double anchor_remainder, double remainder_at_point) {
  PAN_REQUIRE(config.power_k == 2, "objective band is derived for power_k == 2");
  const double delta = anchor_remainder - remainder_at_point;
  if (delta < 0.0) {
    throw DomainError("point remainder exceeds anchor remainder: no admissible objective");
  }
  const double width =
      config.lambda1 * delta / (1.0 + std::sqrt(1.0 + 2.0 * config.omega * config.lambda1 * delta));
  return {anchor_objective, anchor_objective + width};
}

}  // namespace pan::linear
