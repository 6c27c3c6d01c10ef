#include <gtest/gtest.h>

#include "hjsbv/grid.hpp"

using namespace hjsbv;

TEST(Grid, ConeDomainIsSymmetricWithOriginNode) {
  auto d = GridDomain::cone(1, 0.5, 2.0, 1.0, 1e-2);
  EXPECT_EQ(d.nx() % 2, 1u);
  EXPECT_NEAR(d.node(d.nx() / 2)[0], 0.0, 1e-14);
  EXPECT_NEAR(d.radius(), 0.5, 1e-12);
  EXPECT_NEAR(d.cone_radius(0.0), 2.5, 1e-12);
  EXPECT_NEAR(d.cone_radius(1.0), 0.5, 1e-12);
  EXPECT_EQ(mask_count(mask_cone(d, 1.0)), 101u);
}

TEST(Grid, RejectsDegenerateBoxes) {
  EXPECT_THROW(GridDomain::box(1, {0, 0}, {0, 0}, {0.1, 0.1}), DomainError);
  EXPECT_THROW(GridDomain::box(1, {0, 0}, {0.1, 0}, {0.1, 0.1}), DomainError);
  EXPECT_THROW(GridDomain::box(3, {0, 0}, {1, 1}, {0.1, 0.1}), DomainError);
  EXPECT_THROW(GridDomain::cone(1, 0.0, 1.0, 1.0, 0.1), DomainError);
}

TEST(Grid, BilinearInterpolationIsExactOnBilinears) {
  auto d = GridDomain::box(2, {-1, -1}, {1, 1}, {0.1, 0.1});
  auto f = GridField::sample(d, 0.0, [](const Point& p) { return 1 + 2 * p[0] - p[1] + 0.5 * p[0] * p[1]; }, 3.0);
  for (Point x : {Point{0.33, -0.71}, Point{-1, 1}, Point{0.999, 0.05}})
    EXPECT_NEAR(f.interpolate(x), 1 + 2 * x[0] - x[1] + 0.5 * x[0] * x[1], 1e-12);
  EXPECT_TRUE(std::isnan(f.interpolate({1.5, 0})));
}

TEST(Grid, DiscreteLipschitz) {
  auto d = GridDomain::box(1, {0, 0}, {1, 0}, {0.01, 1});
  auto f = GridField::sample(d, 0.0, [](const Point& p) { return 3 * p[0]; }, 3.0);
  EXPECT_NEAR(f.discrete_lipschitz(), 3.0, 1e-9);
  EXPECT_TRUE(f.lipschitz_ok());
  f.lipschitz_bound = 2.0;
  EXPECT_FALSE(f.lipschitz_ok());
}

TEST(Grid, NeighborsStopAtBoundary) {
  auto d = GridDomain::box(2, {0, 0}, {1, 1}, {0.5, 0.5});
  EXPECT_EQ(d.neighbor(0, 0, -1), -1);
  EXPECT_EQ(d.neighbor(0, 1, +1), 3);
  EXPECT_EQ(d.neighbor(8, 0, +1), -1);
}
