#include <gtest/gtest.h>

#include "hjsbv/bv.hpp"
#include "hjsbv/oracle_1d.hpp"

using namespace hjsbv;

namespace {

HamiltonianModel half_p2(int dim = 1) {
  return HamiltonianModel::quadratic(Eigen::MatrixXd::Identity(dim, dim), 1.0);
}

HopfLaxSolution make(const std::function<double(const Point&)>& u0, double lip, double h = 2e-3, double R = 0.5,
                     double T = 1.0) {
  auto H = half_p2();
  return HopfLaxSolution(H, HopfLaxSolution::cone_domain(H, R, T, h), u0, lip);
}

GridField line_field(const std::function<double(double)>& f, double lip, double t, double lo = -1.5,
                     double hi = 1.5, double h = 1e-2) {
  auto d = GridDomain::box(1, {lo, 0}, {hi, 0}, {h, 1});
  return GridField::sample(d, t, [&](const Point& p) { return f(p[0]); }, lip);
}

NodeMask interval(const GridDomain& d, double a, double b) { return mask_box(d, Box{{a, 0}, {b, 0}}); }

const PwaData kMinusAbs{{0.0}, {1.0, -1.0}, 0.0};

std::vector<double> grid(double a, double b, int n) {
  std::vector<double> t;
  for (int k = 0; k < n; ++k) t.push_back(a + (b - a) * k / (n - 1));
  return t;
}

}  // namespace

TEST(Characteristics, FlatSliceIsIdentity) {
  auto f = line_field([](double) { return 0.0; }, 0.0, 0.5);
  auto m = characteristic_map(f, half_p2(), 0.5, 0.0, NodeMask(f.values.size(), 1));
  EXPECT_EQ(m.skipped, 2u);
  for (const auto& c : m.samples) {
    EXPECT_TRUE(c.unique);
    EXPECT_NEAR(c.chi[0], c.x[0], 1e-14);
  }
}

TEST(Characteristics, FocusingQuadraticExpands) {
  const double t = 0.5;
  auto f = line_field([t](double x) { return -x * x / (2 * (1 - t)); }, 3.0, t);
  auto m = characteristic_map(f, half_p2(), t, 0.0, NodeMask(f.values.size(), 1));
  for (const auto& c : m.samples) EXPECT_NEAR(c.chi[0], c.x[0] / (1 - t), 1e-12);
  auto est = image_measure(m, interval(f.domain, -1, 1));
  EXPECT_NEAR(est.covered_volume, 4.0, 4 * f.domain.h[0]);
  EXPECT_DOUBLE_EQ(est.unique_fraction, 1.0);
}

TEST(Characteristics, ShockNodeSourceBox) {
  auto sol = make(kMinusAbs.sampler(), 1.0);
  const double t = 0.5;
  auto m = characteristic_map(sol, t, 0.0);
  const std::size_t mid = sol.domain().nx() / 2;
  const auto* c = m.at(static_cast<std::int64_t>(mid));
  ASSERT_NE(c, nullptr);
  EXPECT_FALSE(c->unique);
  EXPECT_NEAR(c->source_box.lower[0], -t, 1e-6);
  EXPECT_NEAR(c->source_box.upper[0], t, 1e-6);
  for (const auto& s : m.samples)
    if (s.unique) {
      EXPECT_NEAR(s.chi[0], sol.solve_point(t, s.x).minimizers[0][0], 3 * sol.domain().h[0]);
    }
  auto est = image_measure(m, interval(sol.domain(), -1, 1));
  EXPECT_NEAR(est.covered_volume, 2.0, 4 * sol.domain().h[0]);
}

TEST(Characteristics, Injectivity) {
  auto sol = make(kMinusAbs.sampler(), 1.0);
  EXPECT_TRUE(injectivity_report(characteristic_map(sol, 0.7, 0.0)).pass);

  auto convex = line_field([](double x) { return 0.5 * x * x; }, 1.5, 1.0);
  const NodeMask all(convex.values.size(), 1);
  auto bad = injectivity_report(characteristic_map(convex, half_p2(), 1.0, 0.0, all));
  EXPECT_FALSE(bad.pass);
  EXPECT_GT(bad.collision_count, 100u);
  convex.time = 0.25;
  EXPECT_TRUE(injectivity_report(characteristic_map(convex, half_p2(), 0.25, 0.0, all)).pass);
}

TEST(FFunctional, AffineAndKinkFollowTheCone) {
  auto aff = make([](const Point& y) { return 0.4 * y[0]; }, 0.4);
  auto kink = make(kMinusAbs.sampler(), 1.0);
  const double h = aff.domain().h[0];
  for (double t : {0.1, 0.4, 0.9}) {
    EXPECT_NEAR(f_functional(aff, t), aff.domain().cone_volume(t), 4 * h) << t;
    EXPECT_NEAR(f_functional(kink, t), 2 * (0.5 + 2 * (1 - t)), 4 * h) << t;
  }
  auto smooth = make([](const Point& y) { return 0.3 * std::sin(y[0]); }, 0.3);
  EXPECT_NEAR(f_functional(smooth, 0.01), smooth.domain().cone_volume(0.0), 0.05);
}

TEST(FTrace, AffineAndKinkHaveNoDrops) {
  auto aff = make([](const Point& y) { return 0.4 * y[0]; }, 0.4);
  auto tr = f_trace(aff, grid(0.1, 1.0, 10));
  EXPECT_TRUE(tr.monotone);
  EXPECT_TRUE(tr.discontinuities.empty());
  auto kink = make(kMinusAbs.sampler(), 1.0);
  auto tk = f_trace(kink, grid(0.1, 1.0, 10));
  EXPECT_TRUE(tk.monotone);
  EXPECT_TRUE(tk.discontinuities.empty());
  EXPECT_THROW(f_trace(kink, {0.5, 0.4}), DomainError);
}

TEST(FTrace, FocusingDataDropsAtShockTime) {
  // -y^2 on |y| <= 1/2 joined to -|y| + 1/4: characteristics focus at t = 1/2
  auto u0 = [](const Point& y) { return std::abs(y[0]) <= 0.5 ? -y[0] * y[0] : -std::abs(y[0]) + 0.25; };
  auto sol = make(u0, 1.0);
  auto times = grid(0.1, 0.9, 17);
  auto tr = f_trace(sol, times);
  EXPECT_TRUE(tr.monotone);
  ASSERT_EQ(tr.discontinuities.size(), 1u);
  EXPECT_NEAR(tr.discontinuities[0].time, 0.5, 0.05 + 1e-9);
  EXPECT_GT(tr.discontinuities[0].drop, 0.8);
}

TEST(Lemmas, CompressionCheck) {
  auto focus = make([](const Point& y) { return -0.5 * y[0] * y[0]; }, 2.5);
  const NodeMask E = interval(focus.domain(), -0.5, 0.5);
  const double t = 0.25;
  auto same = compression_check(focus, t, 0.0, E);
  EXPECT_TRUE(same.pass);
  EXPECT_NEAR(same.lhs, same.rhs, 1e-12);
  auto full = compression_check(focus, t, t, E);
  EXPECT_TRUE(full.pass);
  EXPECT_DOUBLE_EQ(full.rhs, 0.0);
  EXPECT_NEAR(full.lhs, full.set_volume, 4e-3);
  auto half = compression_check(focus, t, 0.125, E);
  EXPECT_TRUE(half.pass);
  // concave data: no injectivity horizon below T
  EXPECT_NO_THROW(compression_check(focus, 0.9, 0.1, E));
  auto convex = make([](const Point& y) { return 0.5 * y[0] * y[0]; }, 2.5);
  EXPECT_NEAR(solution_epsilon(convex), 0.25, 1e-6);
  EXPECT_THROW(compression_check(convex, 0.5, 0.1, E), DomainError);
}

TEST(Lemmas, LowerBoundConstants) {
  auto [c0, c1] = lower_bound_constants(1.0, 1);
  EXPECT_DOUBLE_EQ(c0, 1.0);
  EXPECT_DOUBLE_EQ(c1, 1.0);
  auto [d0, d1] = lower_bound_constants(2.0, 2);
  EXPECT_DOUBLE_EQ(d0, 3.0 / 64.0);
  EXPECT_DOUBLE_EQ(d1, 4.0 / 64.0);
}

TEST(Lemmas, LowerBoundCheck) {
  auto flat = make([](const Point&) { return 0.0; }, 0.0);
  auto r = lower_bound_check(flat, 0.5, interval(flat.domain(), 0, 1));
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.lhs, r.rhs, 1e-9);
  EXPECT_NEAR(r.laplacian_mass, 0.0, 1e-12);

  auto shock = make(kMinusAbs.sampler(), 1.0);
  auto rs = lower_bound_check(shock, 0.5, interval(shock.domain(), -0.3, 0.3));
  EXPECT_TRUE(rs.pass);
  EXPECT_LT(rs.laplacian_mass, -1.9);

  auto focus = make([](const Point& y) { return -0.5 * y[0] * y[0]; }, 2.5);
  const double t = 0.25;
  auto rf = lower_bound_check(focus, t, interval(focus.domain(), -0.5, 0.5));
  EXPECT_TRUE(rf.pass);
  EXPECT_NEAR(rf.laplacian_mass, -rf.set_volume / (1 - t), 1e-6);
  EXPECT_NEAR(rf.lhs, rf.set_volume / (1 - t), 1e-2);
}

TEST(Bv, Calibration) {
  const double h = 1e-3;
  std::vector<double> step, ramp;
  for (int i = 0; i < 1000; ++i) {
    const double x = i * h;
    step.push_back((x >= 0.5 ? 1.0 : 0.0) + 0.01 * std::sin(x));
    ramp.push_back(2 * x);
  }
  auto bs = bv_decompose(step, h);
  EXPECT_GE(bs.jump_mass, 0.99 * bs.total_mass);
  ASSERT_EQ(bs.atoms.size(), 1u);
  EXPECT_NEAR(bs.atoms[0].location, 0.5, h);
  auto br = bv_decompose(ramp, h);
  EXPECT_GE(br.ac_mass, 0.99 * br.total_mass);
  EXPECT_NEAR(br.total_mass, 2.0 - 2 * h, 1e-9);
  EXPECT_THROW(bv_decompose({1, 2, 3}, h), DomainError);
  for (const auto* b : {&bs, &br}) EXPECT_NEAR(b->ac_mass + b->jump_mass + b->cantor_proxy, b->total_mass, 1e-12);
}

TEST(Bv, SteepResolvedSlopeIsAbsolutelyContinuous) {
  // flat except a 200-cell stretch 50 times steeper than the density bound
  const double h = 1e-3;
  std::vector<double> g;
  for (int i = 0; i < 1000; ++i) {
    const double x = i * h;
    g.push_back(x < 0.4 ? 0.0 : (x < 0.6 ? -50 * (x - 0.4) : -10.0));
  }
  BvOptions opt;
  opt.density_bound = 1.0;
  opt.atom_floor = 4 * h;
  const auto smooth = bv_decompose(g, h, 0.0, opt);
  EXPECT_GE(smooth.ac_mass, 0.99 * smooth.total_mass);
  opt.smooth_run = 0;
  const auto banded = bv_decompose(g, h, 0.0, opt);
  EXPECT_GE(banded.jump_mass + banded.cantor_proxy, 0.99 * banded.total_mass);
}

TEST(Bv, FragmentedMassStaysInTheProxy) {
  const double h = std::pow(3.0, -9);
  std::vector<double> g;
  for (int i = 0; i <= 19683; ++i) g.push_back(cantor_staircase(i * h, 8));
  const auto b = bv_decompose(g, h);
  EXPECT_GE(b.cantor_proxy, 0.9 * b.total_mass);
}

TEST(ExceptionalScan, AffineAndPwaAreClean) {
  auto aff = make([](const Point& y) { return 0.4 * y[0]; }, 0.4);
  auto sa = exceptional_time_scan(aff, grid(0.1, 1.0, 10));
  EXPECT_TRUE(sa.flagged_times.empty());
  PwaData d{{-0.6, -0.1, 0.3}, {0.5, -0.4, 0.2, -0.8}, 0.0};
  auto pw = make(d.sampler(), d.lipschitz());
  auto sp = exceptional_time_scan(pw, grid(0.1, 1.0, 10));
  EXPECT_TRUE(sp.consistent);
}
