#include <gtest/gtest.h>

#include <random>

#include "hjsbv/convex_tools.hpp"
#include "hjsbv/hopf_lax.hpp"
#include "hjsbv/oracle_1d.hpp"

using namespace hjsbv;

namespace {

GridField line_field(const std::function<double(double)>& f, double lip, double lo = -1, double hi = 1,
                     double h = 1e-2) {
  auto d = GridDomain::box(1, {lo, 0}, {hi, 0}, {h, 1});
  return GridField::sample(d, 0.0, [&](const Point& p) { return f(p[0]); }, lip);
}

std::size_t node_at(const GridField& f, double x) {
  return static_cast<std::size_t>(std::llround((x - f.domain.lower[0]) / f.domain.h[0]));
}

Eigen::MatrixXd random_psd(std::mt19937& rng, int n) {
  std::normal_distribution<double> N;
  Eigen::MatrixXd G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = N(rng);
  return G * G.transpose();
}

}  // namespace

TEST(ConvexTools, SemiconcavityExamples) {
  const Box all{{-1, 0}, {1, 0}};
  EXPECT_DOUBLE_EQ(semiconcavity_constant(line_field([](double x) { return -x * x; }, 2), all), 0.0);
  EXPECT_NEAR(semiconcavity_constant(line_field([](double x) { return 0.5 * x * x; }, 1), all), 1.0, 1e-9);
  EXPECT_THROW(semiconcavity_constant(line_field([](double x) { return x; }, 1), Box{{0, 0}, {0.015, 0}}),
               DomainError);
}

TEST(ConvexTools, SemiconcavityOfHopfLaxRamp) {
  PwaData ramp{{-1.0, 0.0, 1.0}, {0.0, -1.0, 1.0, 0.0}, 1.0};
  auto H = HamiltonianModel::quadratic(Eigen::MatrixXd::Identity(1, 1), 1.0);
  HopfLaxSolution sol(H, HopfLaxSolution::cone_domain(H, 0.5, 1.0, 1e-3), ramp.sampler(), 1.0);
  const double c = semiconcavity_constant(sol.solve_slice(0.5));
  EXPECT_LE(c, 2.0 * 1.05);
  EXPECT_GE(c, 1.9);
}

TEST(ConvexTools, SuperdifferentialExamples) {
  auto kink = line_field([](double x) { return -std::abs(x); }, 1);
  auto g = superdifferential(kink, node_at(kink, 0.0));
  EXPECT_FALSE(g.single_valued);
  ASSERT_EQ(g.polytope.size(), 2u);
  EXPECT_NEAR(std::min(g.polytope[0][0], g.polytope[1][0]), -1.0, 1e-9);
  EXPECT_NEAR(std::max(g.polytope[0][0], g.polytope[1][0]), 1.0, 1e-9);
  EXPECT_NEAR(g.representative[0], 0.0, 1e-12);

  auto aff = line_field([](double x) { return 3 * x; }, 3);
  auto ga = superdifferential(aff, node_at(aff, 0.31));
  EXPECT_TRUE(ga.single_valued);
  EXPECT_NEAR(ga.representative[0], 3.0, 1e-9);

  EXPECT_THROW(superdifferential(aff, 0), DomainError);

  auto d2 = GridDomain::box(2, {-1, -1}, {1, 1}, {0.05, 0.05});
  auto f2 = GridField::sample(d2, 0.0, [](const Point& p) { return -std::abs(p[0]); }, 1.0);
  auto g2 = superdifferential(f2, d2.index(20, 13));
  EXPECT_FALSE(g2.single_valued);
  for (const auto& v : g2.polytope) {
    EXPECT_NEAR(std::abs(v[0]), 1.0, 1e-9);
    EXPECT_NEAR(v[1], 0.0, 1e-9);
  }
}

TEST(ConvexTools, MoreauExamples) {
  auto aff = line_field([](double x) { return 3 * x; }, 3);
  auto ma = moreau_regularize(aff, 0.1);
  for (double x : {-0.5, 0.0, 0.4, 1.0}) EXPECT_NEAR(ma.values[node_at(aff, x)], 3 * x - 0.45, 1e-12) << x;

  auto cav = line_field([](double x) { return -x * x; }, 4, -2, 2);
  auto mc = moreau_regularize(cav, 0.25);
  for (double x : {-0.9, -0.3, 0.0, 0.5, 1.0})
    EXPECT_NEAR(mc.values[node_at(cav, x)], -2 * x * x, 1e-12) << x;

  auto flat = line_field([](double) { return 5.0; }, 0);
  auto mf = moreau_regularize(flat, 3.0);
  for (double v : mf.values) EXPECT_DOUBLE_EQ(v, 5.0);

  EXPECT_THROW(moreau_regularize(cav, 0.5), PreconditionError);
  EXPECT_THROW(moreau_regularize(cav, 0.0), PreconditionError);
}

TEST(ConvexTools, MoreauOrderProperties) {
  auto f = line_field([](double x) { return std::sin(3 * x) + 0.2 * std::abs(x - 0.1); }, 3.2);
  auto a = moreau_regularize(f, 0.02), b = moreau_regularize(f, 0.05);
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    EXPECT_LE(a.values[k], f.values[k] + 1e-15);
    EXPECT_LE(b.values[k], a.values[k] + 1e-15);
  }
  auto g = line_field([](double x) { return std::sin(3 * x) - 0.2 * std::abs(x - 0.1); }, 3.2);
  auto up = moreau_regularize(g, 0.02, EnvelopeSide::Upper);
  for (std::size_t k = 0; k < g.values.size(); ++k) EXPECT_GE(up.values[k], g.values[k] - 1e-15);
  EXPECT_THROW(moreau_regularize(g, 0.03), PreconditionError);
  EXPECT_NO_THROW(moreau_regularize(g, 0.03, EnvelopeSide::Upper));
}

TEST(ConvexTools, YosidaTransform) {
  Graph seg{1, {}};
  for (int k = 0; k <= 20; ++k) seg.points.push_back({{0, 0}, {-1 + 0.1 * k, 0}});
  auto out = yosida_graph_transform(seg, 1.0);
  for (const auto& p : out.points) EXPECT_NEAR(p.x[0], -p.y[0], 1e-15);

  Graph line{1, {}};
  for (int k = -10; k <= 10; ++k) line.points.push_back({{0.1 * k, 0}, {-0.1 * k, 0}});
  auto o2 = yosida_graph_transform(line, 0.5);
  for (std::size_t k = 0; k < line.points.size(); ++k) {
    EXPECT_NEAR(o2.points[k].x[0], 1.5 * line.points[k].x[0], 1e-15);
    if (o2.points[k].x[0] != 0.0) {
      EXPECT_NEAR(o2.points[k].y[0] / o2.points[k].x[0], -2.0 / 3.0, 1e-12);
    }
  }
  auto id = yosida_graph_transform(line, 0.0);
  for (std::size_t k = 0; k < line.points.size(); ++k) EXPECT_EQ(id.points[k].x[0], line.points[k].x[0]);
  EXPECT_THROW(yosida_graph_transform(Graph{1, {}}, 1.0), DomainError);
}

TEST(ConvexTools, YosidaSelectionIsLipschitz) {
  auto f = line_field([](double x) { return -std::abs(x) - 0.5 * x * x; }, 2.5);
  const Graph g = supergradient_graph(f, 0.0, true);
  ASSERT_TRUE(monotone_check(g).pass);
  const double eps = 0.3;
  auto out = yosida_graph_transform(g, eps);
  for (std::size_t i = 0; i < out.points.size(); ++i)
    for (std::size_t j = i + 1; j < out.points.size(); j += 7) {
      const double dx = std::abs(out.points[i].x[0] - out.points[j].x[0]);
      const double dy = std::abs(out.points[i].y[0] - out.points[j].y[0]);
      EXPECT_LE(dy, dx / eps + 1e-9);
    }
}

TEST(ConvexTools, MonotoneCheck) {
  Graph dec{1, {}}, inc{1, {}};
  for (int k = 0; k < 100; ++k) {
    const double x = -1 + 0.02 * k;
    dec.points.push_back({{x, 0}, {-2 * x, 0}});
    inc.points.push_back({{x, 0}, {x, 0}});
  }
  EXPECT_TRUE(monotone_check(dec).pass);
  auto r = monotone_check(inc);
  EXPECT_FALSE(r.pass);
  ASSERT_TRUE(r.worst_pair.has_value());
  auto quart = line_field([](double x) { return -x * x * x * x; }, 4);
  EXPECT_TRUE(monotone_check(supergradient_graph(quart, 0.0)).pass);
}

TEST(ConvexTools, ShiftedSupergradientsAreMonotone) {
  auto f = line_field([](double x) { return 0.4 * x * x - std::abs(x - 0.2); }, 2);
  const double C = semiconcavity_constant(f);
  EXPECT_FALSE(monotone_check(supergradient_graph(f, 0.0)).pass);
  EXPECT_TRUE(monotone_check(supergradient_graph(f, C)).pass);
}

TEST(ConvexTools, DeterminantMonotonicity) {
  auto r = psd_det_monotone(Eigen::Matrix2d::Identity() * 2.0, Eigen::Matrix2d::Identity());
  EXPECT_DOUBLE_EQ(r.det_E, 4.0);
  EXPECT_TRUE(r.pass);
  Eigen::MatrixXd D = Eigen::Matrix2d::Identity();
  EXPECT_TRUE(psd_det_monotone(D, D).pass);
  EXPECT_THROW(psd_det_monotone(D, D * 2.0), DomainError);
  std::mt19937 rng(1);
  for (int k = 0; k < 200; ++k) {
    Eigen::MatrixXd A = random_psd(rng, 3), B = random_psd(rng, 3);
    EXPECT_TRUE(psd_det_monotone(A + B, A).pass);
  }
}

TEST(ConvexTools, TraceBound) {
  Eigen::MatrixXd M = Eigen::Matrix2d::Zero();
  M(0, 0) = -1;
  EXPECT_TRUE(trace_norm_bound(M).pass);
  EXPECT_DOUBLE_EQ(trace_norm_bound(M).trace, -1.0);
  EXPECT_NEAR(trace_norm_bound(-Eigen::Matrix2d::Identity() / std::sqrt(2.0)).trace, -std::sqrt(2.0), 1e-15);
  EXPECT_THROW(trace_norm_bound(Eigen::Matrix2d::Identity() / std::sqrt(2.0)), DomainError);
  EXPECT_THROW(trace_norm_bound(-Eigen::Matrix2d::Identity()), DomainError);
}
