#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "pan/common/error.hpp"
#include "pan/linear/search.hpp"

using namespace pan::linear;

namespace {

const LinearControlProblem toy = LinearControlProblem::toy();
const double kAnchor = 40.0 / 49.0;  // J at the lambda = 0.5 solution

// brute-force lattice minimum, written independently of grid_minimize
struct Cell {
  double u, y, v;
};
Cell brute_min(const std::function<double(double, double)>& f, double lo, double hi, int res) {
  Cell best{0, 0, std::numeric_limits<double>::infinity()};
  const double h = (hi - lo) / (res - 1);
  for (int i = 0; i < res; ++i) {
    for (int j = 0; j < res; ++j) {
      const double u = lo + i * h, y = lo + j * h;
      const double v = f(u, y);
      if (v < best.v) best = {u, y, v};
    }
  }
  return best;
}

}  // namespace

TEST(LinearProblem, RejectsBadShapesAndRho) {
  Matrix A(1, 1), K(1, 1);
  A << 1;
  K << 2;
  Vector b(1);
  b << 2;
  EXPECT_THROW(LinearControlProblem(A, K, b, 0.0), pan::ContractViolation);
  EXPECT_THROW(LinearControlProblem(A, K, Vector(2), 1.0), pan::ContractViolation);
  Matrix K2(2, 1);
  K2 << 1, 1;
  EXPECT_THROW(LinearControlProblem(A, K2, b, 1.0), pan::ContractViolation);  // m > n
}

TEST(LinearProblem, SingularSpanReported) {
  Matrix A(1, 2), K(1, 2);
  A << 1, 1;
  K << 2, 2;
  Vector b(1);
  b << 1;
  try {
    LinearControlProblem p(A, K, b, 1.0);
    FAIL() << "expected SingularSystemError";
  } catch (const pan::SingularSystemError& e) {
    EXPECT_LT(e.relative_min_singular_value(), 1e-10);
  }
}

TEST(LinearObjective, SpecExamples) {
  EXPECT_DOUBLE_EQ(evaluate_objective(toy, PapPoint(2.0, 0.0)), 0.0);
  EXPECT_NEAR(evaluate_objective(toy, PapPoint(0.4, 0.8)), 0.5 * 1.6 * 1.6 + 0.5 * 0.64, 1e-15);
  EXPECT_NEAR(evaluate_objective(toy, PapPoint(6.0 / 7, 4.0 / 7)), 40.0 / 49, 1e-15);
  EXPECT_THROW(evaluate_objective(toy, PapPoint(Vector::Zero(2), Vector::Zero(1))),
               pan::ContractViolation);
}

TEST(LinearRemainder, SpecExamples) {
  EXPECT_NEAR(evaluate_remainder(toy, PapPoint(0.4, 0.8)), 0.0, 1e-15);
  EXPECT_NEAR(evaluate_remainder(toy, PapPoint(6.0 / 7, 4.0 / 7)), 64.0 / 49, 1e-15);
  EXPECT_NEAR(evaluate_remainder(toy, PapPoint(6.0 / 13, 10.0 / 13)), 4.0 / 169, 1e-15);
}

TEST(LinearPenalty, SpecExamples) {
  EXPECT_NEAR(evaluate_penalty(toy, PapPoint(6.0 / 7, 4.0 / 7), 0.5), 8.0 / 7, 1e-14);
  EXPECT_NEAR(evaluate_penalty(toy, PapPoint(6.0 / 13, 10.0 / 13), 5.0), 20.0 / 13, 1e-14);
  for (double l : {0.1, 3.0, 1e6}) EXPECT_NEAR(evaluate_penalty(toy, PapPoint(0.4, 0.8), l), 1.6, 1e-12);
  EXPECT_THROW(evaluate_penalty(toy, PapPoint(0.0, 0.0), 0.0), pan::ContractViolation);
}

TEST(LinearExact, ToyAndBrute) {
  const auto e = exact_solution(toy);
  EXPECT_NEAR(e.u(0), 0.4, 1e-12);
  EXPECT_NEAR(e.y(0), 0.8, 1e-12);
  // J restricted to y = 2u: 1/2 (u-2)^2 + 2u^2, minimised on a fine 1D lattice
  double best = 1e300, arg = 0;
  for (int i = 0; i <= 500000; ++i) {
    const double u = -2 + 5.0 * i / 500000;
    const double v = 0.5 * (u - 2) * (u - 2) + 2 * u * u;
    if (v < best) best = v, arg = u;
  }
  EXPECT_NEAR(e.u(0), arg, 1e-5);
}

TEST(LinearExact, ZeroDataAndIdentity) {
  Matrix A = Matrix::Identity(2, 2), K = Matrix::Identity(2, 2);
  Vector b(2);
  b << 1, 1;
  const auto e = exact_solution(LinearControlProblem(A, K, b, 1.0));
  EXPECT_NEAR((e.u - Vector::Constant(2, 0.5)).norm(), 0.0, 1e-12);
  EXPECT_NEAR((e.y - Vector::Constant(2, 0.5)).norm(), 0.0, 1e-12);
  const auto z = exact_solution(LinearControlProblem(A, K, Vector::Zero(2), 3.0));
  EXPECT_EQ(z.stacked().norm(), 0.0);
}

TEST(LinearPenaltySolution, ClosedFormsAndStationarity) {
  const auto p1 = penalty_solution(toy, 0.5);
  const auto p2 = penalty_solution(toy, 5.0);
  EXPECT_NEAR(p1.u(0), 6.0 / 7, 1e-12);
  EXPECT_NEAR(p1.y(0), 4.0 / 7, 1e-12);
  EXPECT_NEAR(p2.u(0), 6.0 / 13, 1e-12);
  EXPECT_NEAR(p2.y(0), 10.0 / 13, 1e-12);
  EXPECT_LT(penalty_gradient(toy, p1, 0.5).norm(), 1e-9);
  EXPECT_LT(penalty_gradient(toy, p2, 5.0).norm(), 1e-9);
  const auto far = penalty_solution(toy, 1e8);
  EXPECT_LT(std::hypot(far.u(0) - 0.4, far.y(0) - 0.8), 1e-6);
}

TEST(LinearPenaltySolution, RandomProblemsAreStationary) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int t = 0; t < 50; ++t) {
    Matrix A(3, 4), K(2, 4);
    for (int i = 0; i < A.size(); ++i) A.data()[i] = g(rng);
    for (int i = 0; i < K.size(); ++i) K.data()[i] = g(rng);
    Vector b(3);
    for (int i = 0; i < 3; ++i) b(i) = g(rng);
    const LinearControlProblem P(A, K, b, 0.7);
    const auto s = penalty_solution(P, 2.0);
    EXPECT_LT(penalty_gradient(P, s, 2.0).norm(), 1e-9);
    // exact solution: KKT of min J s.t. Ku = y
    const auto e = exact_solution(P);
    EXPECT_LT((K * e.u - e.y).norm(), 1e-10 * (1 + e.u.norm()));
    const Vector gJu = A.transpose() * (A * e.u - b);
    const Vector lagr = gJu + K.transpose() * (0.7 * e.y);
    EXPECT_LT(lagr.norm(), 1e-9);
  }
}

TEST(LinearHessian, EntriesAndConditioning) {
  Matrix expect5(2, 2), expect05(2, 2);
  expect5 << 21, -10, -10, 6;
  expect05 << 3, -1, -1, 1.5;
  EXPECT_TRUE(penalty_hessian(toy, 5.0).isApprox(expect5, 1e-14));
  EXPECT_TRUE(penalty_hessian(toy, 0.5).isApprox(expect05, 1e-14));
  EXPECT_NEAR(penalty_hessian(toy, 5.0).determinant(), 26.0, 1e-12);
  double prev = 0;
  for (double l : {0.5, 5.0, 50.0, 500.0}) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(penalty_hessian(toy, l));
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
    const double c = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
    EXPECT_GT(c, prev);
    prev = c;
  }
}

TEST(LinearPap, EvaluateExamples) {
  const PapConfig cfg{5.0, 0.5, 1.0, 2};
  const auto a = evaluate_pap(toy, cfg, kAnchor, PapPoint(6.0 / 7, 4.0 / 7));
  EXPECT_EQ(a.region, Region::Omega2);
  EXPECT_NEAR(a.adversarial_value, 200.0 / 49, 1e-12);
  const auto b = evaluate_pap(toy, cfg, kAnchor, PapPoint(0.4, 0.8));
  EXPECT_EQ(b.region, Region::Omega1);
  EXPECT_NEAR(b.adversarial_value, 1.6 + std::pow(1.6 - kAnchor, 2), 1e-12);
  EXPECT_NEAR(b.adversarial_value, 2.214144, 1e-6);  // 1.6 + 0.783673^2
  EXPECT_NEAR(b.objective_gap, 1.6 - kAnchor, 1e-15);
  // omega -> 0 leaves the large penalty
  const PapConfig tiny{5.0, 0.5, 1e-14, 2};
  EXPECT_NEAR(evaluate_pap(toy, tiny, kAnchor, PapPoint(0.4, 0.8)).adversarial_value,
              evaluate_penalty(toy, PapPoint(0.4, 0.8), 5.0), 1e-12);
  // J exactly at the anchor counts as Omega2
  const double J_hat = evaluate_objective(toy, PapPoint(0.4, 0.8));
  EXPECT_EQ(evaluate_pap(toy, cfg, J_hat, PapPoint(0.4, 0.8)).region, Region::Omega2);
  EXPECT_EQ(evaluate_pap(toy, cfg, std::nextafter(J_hat, 0.0), PapPoint(0.4, 0.8)).region, Region::Omega1);
}

TEST(LinearPap, ConfigValidation) {
  EXPECT_THROW((PapConfig{0.5, 5.0, 1.0, 2}.validate()), pan::ContractViolation);
  EXPECT_THROW((PapConfig{5.0, 0.5, 0.0, 2}.validate()), pan::ContractViolation);
  EXPECT_THROW((PapConfig{5.0, 0.5, 1.0, 0}.validate()), pan::ContractViolation);
  EXPECT_NO_THROW((PapConfig{5.0, 0.5, 1.0, 1}.validate()));
}

TEST(LinearPap, GradientAtExactSolution) {
  const PapConfig cfg{5.0, 0.5, 1.0, 2};
  const auto g = pap_gradient(toy, cfg, kAnchor, PapPoint(0.4, 0.8));
  const double scale = 1 + 2 * (1.6 - kAnchor);
  EXPECT_NEAR(g.gradient(0), -1.6 * scale, 1e-12);
  EXPECT_NEAR(g.gradient(1), 0.8 * scale, 1e-12);
  EXPECT_NEAR(g.gradient(0), -4.1078, 1e-4);
  EXPECT_NEAR(g.gradient(1), 2.0539, 1e-4);
  EXPECT_FALSE(g.nonsmooth);
}

TEST(LinearPap, GradientFiniteDifferencesAllPowers) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-2.0, 3.0);
  for (int k = 1; k <= 4; ++k) {
    const PapConfig cfg{5.0, 0.5, 1.0, k};
    int done = 0;
    while (done < 100) {
      const PapPoint p(U(rng), U(rng));
      if (std::abs(evaluate_objective(toy, p) - kAnchor) < 1e-4) continue;
      const Vector g = pap_gradient(toy, cfg, kAnchor, p).gradient;
      for (int i = 0; i < 2; ++i) {
        Vector zp = p.stacked(), zm = p.stacked();
        zp(i) += 1e-6;
        zm(i) -= 1e-6;
        const double fd = (evaluate_pap(toy, cfg, kAnchor, PapPoint::unstack(toy, zp)).adversarial_value -
                           evaluate_pap(toy, cfg, kAnchor, PapPoint::unstack(toy, zm)).adversarial_value) /
                          2e-6;
        EXPECT_LT(std::abs(fd - g(i)) / std::max(1.0, std::abs(g(i))), 1e-6) << "k=" << k;
      }
      ++done;
    }
  }
}

TEST(LinearPap, Omega2GradientIsLargePenalty) {
  const PapConfig cfg{5.0, 0.5, 3.0, 2};
  const PapPoint p(1.5, 0.2);  // J = 0.145 < anchor
  ASSERT_LT(evaluate_objective(toy, p), kAnchor);
  EXPECT_LT((pap_gradient(toy, cfg, kAnchor, p).gradient - penalty_gradient(toy, p, 5.0)).norm(), 1e-14);
}

TEST(LinearPap, BoundaryBehaviour) {
  // a point with J exactly equal to the anchor
  const double r = std::sqrt(2 * kAnchor);
  const PapPoint b(2.0 + r, 0.0);
  ASSERT_NEAR(evaluate_objective(toy, b), kAnchor, 1e-14);
  const PapConfig k2{5.0, 0.5, 1.0, 2};
  const double J = evaluate_objective(toy, b);
  const auto g2 = pap_gradient(toy, k2, J, b);
  EXPECT_LT((g2.gradient - penalty_gradient(toy, b, 5.0)).norm(), 1e-12);
  const PapConfig k1{5.0, 0.5, 1.0, 1};
  EXPECT_TRUE(pap_gradient(toy, k1, J, b).nonsmooth);
}

TEST(LinearEquivalentLambda, Examples) {
  EXPECT_NEAR(equivalent_lambda({5.0, 0.5, 1.0, 2}, 1.6, kAnchor), 5.0 / (1 + 2 * (1.6 - kAnchor)), 1e-12);
  EXPECT_NEAR(equivalent_lambda({5.0, 0.5, 1.0, 2}, 1.6, kAnchor), 1.947536, 1e-6);
  EXPECT_DOUBLE_EQ(equivalent_lambda({5.0, 0.5, 1.0, 2}, kAnchor, kAnchor), 5.0);
  EXPECT_NEAR(equivalent_lambda({5.0, 0.5, 100.0, 2}, kAnchor + 0.783673, kAnchor), 5.0 / (1 + 200 * 0.783673), 1e-12);
  EXPECT_LT(equivalent_lambda({5.0, 0.5, 100.0, 2}, kAnchor + 0.783673, kAnchor), 0.5);  // below lambda2
  EXPECT_THROW(equivalent_lambda({5.0, 0.5, 1.0, 2}, 0.1, kAnchor), pan::DomainError);
}

TEST(LinearOmegaBound, Examples) {
  const double gap = 1.6 - kAnchor;
  const double expected = (5 * 64.0 / 49 - 2 * gap) / (2 * gap * gap);
  const auto b = omega_upper_bound(toy, 5.0, 0.5);
  EXPECT_NEAR(b.value, expected, 1e-12);
  EXPECT_NEAR(b.value, 4.0409, 2e-4);  // 4.04080 before rounding
  EXPECT_FALSE(b.unbounded);
  EXPECT_GT(omega_upper_bound(toy, 5e6, 0.5).value, 1e6);
  EXPECT_THROW(omega_upper_bound(toy, 0.6, 0.5), pan::DomainError);

  Matrix A(1, 1), K(1, 1);
  A << 1;
  K << 2;
  Vector bb(1);
  bb << 2;
  const LinearControlProblem tiny_rho(A, K, bb, 1e-8);
  const auto t = omega_upper_bound(tiny_rho, 5.0, 0.5);
  EXPECT_GT(t.value, 0.0);
  EXPECT_TRUE(std::isfinite(t.value));
}

TEST(LinearOmegaBound, ConstructionStillAdmissibleJustBelow) {
  // at omega slightly under the bound the exact solution still sits inside the band
  const double w = omega_upper_bound(toy, 5.0, 0.5).value * (1 - 1e-9);
  const auto band = admissible_objective_band({5.0, 0.5, w, 2}, kAnchor, 64.0 / 49, 0.0);
  EXPECT_LT(1.6, band.upper);
  EXPECT_GT(1.6, band.lower);
}

TEST(LinearTheoremCondition, Examples) {
  const auto c = theorem_condition(toy, 5.0, 0.5);
  EXPECT_TRUE(c.holds);
  EXPECT_NEAR(c.margin, 2.5 * 64.0 / 49 - (1.6 - kAnchor), 1e-12);
  const auto f = theorem_condition(toy, 0.6, 0.5);
  EXPECT_FALSE(f.holds);
  EXPECT_NEAR(f.margin, -0.391837, 1e-6);
  Matrix A(1, 1), K(1, 1);
  A << 1;
  K << 2;
  const LinearControlProblem zero(A, K, Vector::Zero(1), 1.0);
  EXPECT_FALSE(theorem_condition(zero, 5.0, 0.5).holds);
}

TEST(LinearBand, Examples) {
  const auto b = admissible_objective_band({5.0, 0.5, 1.0, 2}, kAnchor, 64.0 / 49, 0.0);
  const double dR = 64.0 / 49;
  EXPECT_DOUBLE_EQ(b.lower, kAnchor);
  EXPECT_NEAR(b.upper, kAnchor + 5 * dR / (1 + std::sqrt(1 + 10 * dR)), 1e-12);
  EXPECT_NEAR(b.upper, 2.191242, 1e-6);
  const auto e = admissible_objective_band({5.0, 0.5, 1.0, 2}, kAnchor, 1.0, 1.0);
  EXPECT_EQ(e.lower, e.upper);
  const auto small = admissible_objective_band({5.0, 0.5, 1e-12, 2}, kAnchor, dR, 0.0);
  EXPECT_NEAR(small.upper, kAnchor + 2.5 * dR, 1e-9);
  EXPECT_THROW(admissible_objective_band({5.0, 0.5, 1.0, 2}, kAnchor, 1.0, 2.0), pan::DomainError);
}

TEST(LinearBand, PointsInsideBeatAnchor) {
  // any point with R < R(anchor) and J strictly inside the band has A below A(anchor point)
  const PapConfig cfg{5.0, 0.5, 1.0, 2};
  const double Aanchor = 200.0 / 49;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-2.0, 3.0);
  int hits = 0;
  for (int t = 0; t < 20000; ++t) {
    const PapPoint p(U(rng), U(rng));
    const double R = evaluate_remainder(toy, p);
    if (R >= 64.0 / 49) continue;
    const auto band = admissible_objective_band(cfg, kAnchor, 64.0 / 49, R);
    const double J = evaluate_objective(toy, p);
    if (J > band.lower && J < band.upper) {
      ++hits;
      EXPECT_LT(evaluate_pap(toy, cfg, kAnchor, p).adversarial_value, Aanchor);
    }
  }
  EXPECT_GT(hits, 100);
}

TEST(LinearMinimize, SmallOmegaStaysNearLargePenaltySolution) {
  const auto r01 = minimize_pap(toy, {5.0, 0.5, 0.1, 2}, kAnchor, PapPoint(0.0, 0.0));
  EXPECT_TRUE(r01.converged);
  EXPECT_LT(std::hypot(r01.point.u(0) - 6.0 / 13, r01.point.y(0) - 10.0 / 13), 0.05);
  const auto r1 = minimize_pap(toy, {5.0, 0.5, 1.0, 2}, kAnchor, PapPoint(0.0, 0.0));
  EXPECT_GT(r1.point.u(0), 6.0 / 13);
  EXPECT_LT(r1.point.u(0), 6.0 / 7);
}

TEST(LinearMinimize, AgreesWithBruteForceAndRestarts) {
  const PapConfig cfg{5.0, 0.5, 1.0, 2};
  const auto f = [&](double u, double y) { return evaluate_pap(toy, cfg, kAnchor, PapPoint(u, y)).adversarial_value; };
  const auto coarse = brute_min(f, -2.0, 3.0, 1001);
  const auto r = minimize_pap(toy, cfg, kAnchor, PapPoint(0.0, 0.0));
  EXPECT_NEAR(r.value, coarse.v, 1e-3);
  EXPECT_LE(r.value, coarse.v + 1e-12);
  const auto again = minimize_pap(toy, cfg, kAnchor, r.point);
  EXPECT_LE(again.iterations, 3);
  EXPECT_LT((again.point.stacked() - r.point.stacked()).norm(), 1e-6);
}

TEST(LinearMinimize, RemainderReductionBelowBound) {
  for (double w : {0.1, 1.0, 2.0, 4.0}) {
    ASSERT_LT(w, omega_upper_bound(toy, 5.0, 0.5).value);
    const auto r = minimize_pap(toy, {5.0, 0.5, w, 2}, kAnchor, PapPoint(0.0, 0.0));
    EXPECT_LT(evaluate_remainder(toy, r.point), 64.0 / 49);
    EXPECT_GT(evaluate_objective(toy, r.point), kAnchor);
  }
}

TEST(LinearMinimize, DivergenceDetected) {
  DescentOptions opt;
  opt.max_iterations = 5;
  EXPECT_THROW(minimize_pap(toy, {5.0, 0.5, 1.0, 2}, kAnchor,
                            PapPoint(std::numeric_limits<double>::quiet_NaN(), 0.0), opt),
               pan::DivergenceError);
}

TEST(LinearGrid, MinimaWithinOneCell) {
  const double cell = 5.0 / 2000;
  const auto m = grid_minimize(penalty_field(toy, 0.5), {-2, 3, -2, 3}, 2001);
  EXPECT_LE(std::abs(m.u - 6.0 / 7), cell);
  EXPECT_LE(std::abs(m.y - 4.0 / 7), cell);
  const auto j = grid_minimize(objective_field(toy), {-2, 3, -2, 3}, 2001);
  EXPECT_NEAR(j.u, 2.0, 1e-12);
  EXPECT_NEAR(j.y, 0.0, 1e-12);
  EXPECT_THROW(grid_minimize([](double, double) { return std::nan(""); }, {0, 1, 0, 1}, 5),
               pan::DomainError);
}

TEST(LinearGrid, TiesGoLexicographicallySmallest) {
  const auto m = grid_minimize([](double, double) { return 1.0; }, {0, 1, 0, 1}, 11);
  EXPECT_EQ(m.u, 0.0);
  EXPECT_EQ(m.y, 0.0);
}

TEST(LinearContour, PenaltyAndAdversarialShapes) {
  const auto c = contour_grid(penalty_field(toy, 5.0), {-0.5, 2, -0.5, 2}, 501);
  const double cell = 2.5 / 500;
  EXPECT_LE(std::abs(c.minimum().u - 6.0 / 13), cell);
  EXPECT_LE(std::abs(c.minimum().y - 10.0 / 13), cell);
  ASSERT_EQ(c.samples.size(), 501u * 501u);
  // row-major, y slow
  EXPECT_EQ(c.samples[1].y, c.samples[0].y);
  EXPECT_GT(c.samples[1].u, c.samples[0].u);

  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 9; ++k) {
    const auto f = contour_grid(pap_field(toy, {5.0, 0.5, 5.0, k}, kAnchor), {-2, 3, -2, 3}, 501);
    EXPECT_LE(f.minimum().u, prev + 1e-12) << "k=" << k;
    EXPECT_GE(f.minimum().u, 0.4 - 0.01);
    prev = f.minimum().u;
  }
  const auto flat = contour_grid([](double, double) { return 3.5; }, {0, 1, 0, 1}, 4);
  for (const auto& s : flat.samples) EXPECT_EQ(s.value, 3.5);
}

TEST(LinearContour, CsvHeaderAndPrecision) {
  const auto c = contour_grid(objective_field(toy), {0, 1, 0, 1}, 3);
  std::ostringstream os;
  write_csv(os, c);
  const std::string s = os.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "u,y,value");
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 10);
}

TEST(LinearProperties, PenaltyTradeoffRandomized) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + t % 4, m = 1 + (t / 4) % n;
    Matrix A(n, n), K(m, n);
    for (int i = 0; i < A.size(); ++i) A.data()[i] = g(rng);
    for (int i = 0; i < K.size(); ++i) K.data()[i] = g(rng);
    Vector b(n);
    for (int i = 0; i < n; ++i) b(i) = g(rng);
    const LinearControlProblem P(A, K, b, 1.0);
    const auto s = penalty_solution(P, 1.5);
    const double Js = evaluate_objective(P, s), Rs = evaluate_remainder(P, s);
    for (int q = 0; q < 30; ++q) {
      PapPoint p = s;
      for (int i = 0; i < n; ++i) p.u(i) += g(rng);
      for (int i = 0; i < m; ++i) p.y(i) += g(rng);
      const double J = evaluate_objective(P, p), R = evaluate_remainder(P, p);
      if (J < Js - 1e-12) { EXPECT_GT(R, Rs); }
      if (R < Rs - 1e-12) { EXPECT_GT(J, Js); }
    }
  }
}

TEST(LinearProperties, Continuity) {
  const PapConfig cfg{5.0, 0.5, 1.0, 3};
  const double r = std::sqrt(2 * kAnchor);
  for (double th : {0.3, 1.4, 2.9, 4.4}) {
    const double u = 2 + r * std::cos(th), y = r * std::sin(th);
    const double a0 = evaluate_pap(toy, cfg, kAnchor, PapPoint(u, y)).adversarial_value;
    for (double h : {1e-4, 1e-6, 1e-8}) {
      const double a = evaluate_pap(toy, cfg, kAnchor, PapPoint(u + h, y - h)).adversarial_value;
      EXPECT_LT(std::abs(a - a0), 100 * h);
    }
  }
}
