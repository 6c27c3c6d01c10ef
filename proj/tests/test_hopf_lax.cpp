#include <gtest/gtest.h>

#include <random>

#include "hjsbv/hopf_lax.hpp"
#include "hjsbv/oracle_1d.hpp"

using namespace hjsbv;

namespace {

HamiltonianModel half_p2(int dim = 1) {
  return HamiltonianModel::quadratic(Eigen::MatrixXd::Identity(dim, dim), 1.0);
}

HopfLaxSolution make(const std::function<double(const Point&)>& u0, double lip, int dim = 1, double h = 1e-2,
                     double R = 0.5, double T = 1.0) {
  auto H = half_p2(dim);
  return HopfLaxSolution(H, HopfLaxSolution::cone_domain(H, R, T, h), u0, lip);
}

const PwaData kMinusAbs{{0.0}, {1.0, -1.0}, 0.0};

}  // namespace

TEST(HopfLax, ZeroDataGivesZero) {
  auto sol = make([](const Point&) { return 0.0; }, 0.0);
  auto m = sol.solve_point(0.7, {0.31, 0});
  EXPECT_NEAR(m.value, 0.0, 1e-14);
  EXPECT_TRUE(m.unique);
  EXPECT_NEAR(m.minimizers[0][0], 0.31, 1e-10);
  const auto& f = sol.solve_slice(0.5);
  for (std::size_t k = 0; k < f.values.size(); ++k)
    if (f.finite(k)) {
      EXPECT_NEAR(f.values[k], 0.0, 1e-14);
    }
}

TEST(HopfLax, AffineData) {
  const double b = 0.6;
  auto sol = make([b](const Point& y) { return b * y[0]; }, b);
  const double t = 0.4, x = 0.2;
  auto m = sol.solve_point(t, {x, 0});
  EXPECT_NEAR(m.value, b * x - t * 0.5 * b * b, 1e-10);
  EXPECT_NEAR(m.minimizers[0][0], x - t * b, 1e-8);
  const auto& f = sol.solve_slice(t);
  for (std::size_t k = 0; k < f.values.size(); ++k)
    if (f.finite(k)) {
      EXPECT_NEAR(f.values[k], b * sol.domain().node(k)[0] - t * 0.5 * b * b, 1e-10);
    }
}

TEST(HopfLax, AffineData2d) {
  const Point b{0.3, -0.5};
  auto sol = make([b](const Point& y) { return b[0] * y[0] + b[1] * y[1]; }, 0.6, 2, 0.05);
  const double t = 0.5;
  auto m = sol.solve_point(t, {0.1, 0.2});
  EXPECT_NEAR(m.value, b[0] * 0.1 + b[1] * 0.2 - t * 0.5 * (b[0] * b[0] + b[1] * b[1]), 1e-9);
  EXPECT_NEAR(m.minimizers[0][0], 0.1 - t * b[0], 1e-6);
  EXPECT_NEAR(m.minimizers[0][1], 0.2 - t * b[1], 1e-6);
}

TEST(HopfLax, ConcaveKinkHasTwoMinimizers) {
  auto sol = make(kMinusAbs.sampler(), 1.0, 1, 1e-3);
  auto m = sol.solve_point(1.0, {0, 0});
  EXPECT_NEAR(m.value, -0.5, 1e-10);
  EXPECT_FALSE(m.unique);
  ASSERT_EQ(m.minimizers.size(), 2u);
  auto bf = brute_force_hopf_lax(kMinusAbs.sampler(), sol.model(), 1.0, {0, 0}, 1e-3, 4);
  EXPECT_NEAR(m.value, bf.value, 1e-9);
}

TEST(HopfLax, SliceMatchesExactOracle) {
  auto sol = make(kMinusAbs.sampler(), 1.0, 1, 1e-3);
  const auto& f = sol.solve_slice(0.5);
  double err = 0.0;
  for (std::size_t k = 0; k < f.values.size(); ++k)
    if (f.finite(k))
      err = std::max(err, std::abs(f.values[k] - exact_pwa_solution(kMinusAbs, 1.0, 0.5, sol.domain().node(k)[0]).value));
  EXPECT_LE(err, 1e-8);
  EXPECT_TRUE(f.lipschitz_ok());
}

TEST(HopfLax, OutsideConeIsRejected) {
  auto sol = make([](const Point&) { return 0.0; }, 0.0);
  EXPECT_THROW(sol.solve_point(1.0, {0.9, 0}), DomainError);
  EXPECT_THROW(sol.solve_point(0.0, {0.0, 0}), DomainError);
  EXPECT_THROW(sol.solve_point(1.5, {0.0, 0}), DomainError);
}

TEST(HopfLax, FunctionalIdentity) {
  const double b = -0.7;
  auto aff = make([b](const Point& y) { return b * y[0]; }, 0.7, 1, 1e-2);
  EXPECT_EQ(aff.functional_identity_residual(0.0, 0.5, {}), 0.0);
  EXPECT_LE(aff.functional_identity_residual(0.2, 0.5, {}), 1e-9);
  auto kink = make(kMinusAbs.sampler(), 1.0, 1, 1e-3);
  EXPECT_LE(kink.functional_identity_residual(0.25, 0.5, {}), kink.func_id_tol());
  EXPECT_THROW(kink.functional_identity_residual(0.5, 0.5, {}), DomainError);
}

TEST(HopfLax, LinearProgrammingPrinciple) {
  const double b = 0.5;
  auto aff = make([b](const Point& y) { return b * y[0]; }, b);
  auto r = aff.solve_point(0.8, {0.1, 0});
  auto lp = linear_programming_check(aff, 0.8, 0.3, {0.1, 0});
  EXPECT_TRUE(lp.pass);
  EXPECT_NEAR(lp.y[0], 0.1 - 0.8 * b, 1e-8);
  EXPECT_NEAR(lp.z[0], (0.3 / 0.8) * 0.1 + (1 - 0.3 / 0.8) * r.minimizers[0][0], 1e-12);

  auto zero = make([](const Point&) { return 0.0; }, 0.0);
  auto lz = linear_programming_check(zero, 0.5, 0.2, {0.3, 0});
  EXPECT_TRUE(lz.pass);
  EXPECT_NEAR(lz.y[0], 0.3, 1e-9);
  EXPECT_NEAR(lz.z[0], 0.3, 1e-9);

  auto kink = make(kMinusAbs.sampler(), 1.0, 1, 1e-3);
  auto lk = linear_programming_check(kink, 0.5, 0.25, {0.6, 0});
  EXPECT_TRUE(lk.pass);
  EXPECT_NEAR(lk.y[0], 1.1, 1e-8);
  EXPECT_THROW(linear_programming_check(kink, 1.0, 0.5, {0.0, 0}), PreconditionError);
}

TEST(HopfLax, EpsilonBound) {
  EXPECT_DOUBLE_EQ(epsilon_bound(1, 1, 1), 0.5);
  EXPECT_DOUBLE_EQ(epsilon_bound(2, 4, 0.5), 0.03125);
  EXPECT_DOUBLE_EQ(epsilon_bound(1, 0, 0.5, 3.0), 3.0);
  EXPECT_TRUE(std::isinf(epsilon_bound(1, 0)));
  EXPECT_THROW(epsilon_bound(0, 1), PreconditionError);
}

TEST(HopfLax, SlicesDecreaseForNonpositiveData) {
  auto sol = make(kMinusAbs.sampler(), 1.0, 1, 5e-3);
  const auto& a = sol.solve_slice(0.25);
  const auto& b = sol.solve_slice(0.75);
  for (std::size_t k = 0; k < a.values.size(); ++k)
    if (b.finite(k)) {
      EXPECT_LE(b.values[k], a.values[k] + 1e-12);
    }
}

TEST(HopfLax, RandomPwaAgainstExact) {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> S(-1, 1), B(-1, 1), X(-0.5, 0.5);
  for (int k = 0; k < 20; ++k) {
    PwaData d{{B(rng), B(rng), B(rng)}, {S(rng), S(rng), S(rng), S(rng)}, 0.0};
    std::sort(d.breakpoints.begin(), d.breakpoints.end());
    auto sol = make(d.sampler(), d.lipschitz(), 1, 1e-3, 0.5, 0.5);
    const double t = 0.3, x = X(rng);
    EXPECT_NEAR(sol.solve_point(t, {x, 0}).value, exact_pwa_solution(d, 1.0, t, x).value, 1e-9) << k;
  }
}
