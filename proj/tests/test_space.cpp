#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ipp/region.hpp"
#include "ipp/space.hpp"
#include "ipp/stats.hpp"

using namespace ipp;

namespace {

// Composite Simpson rule, kept independent of the closed forms under test.
template <class F>
double simpson(F f, double a, double b, int n = 2000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

double hyperbolic_area_oracle(double r) {
  return simpson([](double s) { return 2.0 * std::numbers::pi * std::sinh(s); }, 0.0, r);
}

}  // namespace

TEST(Space, TorusDistanceWraps) {
  const Space s = Space::torus(2, 10.0);
  EXPECT_NEAR(s.distance(Point{{0.5, 0.5, 0}}, Point{{9.5, 9.5, 0}}), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(s.distance(Point{{0, 0, 0}}, Point{{5, 0, 0}}), 5.0, 1e-12);
  EXPECT_DOUBLE_EQ(s.volume(), 100.0);
  EXPECT_DOUBLE_EQ(s.half_width(), 5.0);
}

TEST(Space, CylinderLevelsAreAWrappedAxis) {
  const Space s = Space::cylinder(20.0, 40);
  Point a{{1.0, 0, 0}, 0};
  Point b{{1.0, 0, 0}, 39};
  EXPECT_NEAR(s.distance(a, b), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(s.volume(), 800.0);
  EXPECT_EQ(s.axes(), 2);
}

TEST(Space, HyperbolicDistanceFromOrigin) {
  const Space s = Space::hyperbolic(3.0, 1.0);
  EXPECT_NEAR(s.distance(Point{}, Point{{0.5, 0, 0}}), std::log(3.0), 1e-12);
  // d(0, z) = 2 artanh |z|
  EXPECT_NEAR(s.distance(Point{}, Point{{0.3, 0.4, 0}}), 2.0 * std::atanh(0.5), 1e-12);
}

TEST(Space, HyperbolicAreaMatchesQuadrature) {
  for (double r : {0.5, 1.0, 2.0, 3.0}) {
    EXPECT_NEAR(hyperbolic_disk_area(r), hyperbolic_area_oracle(r), 1e-9 * hyperbolic_area_oracle(r));
  }
  EXPECT_NEAR(Space::hyperbolic(2.0, 0.5).volume(), 17.3554, 1e-4);
  EXPECT_NEAR(hyperbolic_disk_area(1.0) / hyperbolic_disk_area(2.0), 0.19661, 1e-5);
}

TEST(Space, DescriptorRoundTrip) {
  for (const char* d : {"torus1:20", "torus2:10", "torus3:4.5", "cyl:20:40", "cylR:8:3", "hyp:3:1", "lat2:2:8"}) {
    const Space s = Space::parse(d);
    EXPECT_EQ(s.descriptor(), d);
    EXPECT_TRUE(Space::parse(s.descriptor()) == s);
  }
}

TEST(Space, ParseErrors) {
  EXPECT_THROW(Space::parse("torus4:10"), SpaceError);
  EXPECT_THROW(Space::parse("torus2:-1"), SpaceError);
  EXPECT_THROW(Space::parse("cyl:10"), SpaceError);
  EXPECT_THROW(Space::parse("hyp:2:3"), SpaceError);
  EXPECT_THROW(Space::parse("sphere:1"), SpaceError);
  EXPECT_THROW(Space::parse("torus2:abc"), SpaceError);
}

TEST(Space, UniformSamplesStayInWindow) {
  Rng rng(5);
  for (const char* d : {"torus1:20", "torus3:4", "cyl:10:7", "cylR:8:3", "hyp:2:0.5"}) {
    const Space s = Space::parse(d);
    for (int k = 0; k < 2000; ++k) EXPECT_TRUE(s.contains(s.sample_uniform(rng))) << d;
  }
}

TEST(Space, HyperbolicUniformRadiusLaw) {
  // Oracle: rejection sampling in the Euclidean unit disk against the
  // hyperbolic density 4 / (1 - |z|^2)^2, truncated at the window radius.
  const Space s = Space::hyperbolic(2.0, 0.5);
  const double rho_max = std::tanh(1.0);
  const double peak = 4.0 / std::pow(1.0 - rho_max * rho_max, 2);
  Rng rng(11), oracle_rng(12);
  std::vector<double> a, b;
  for (int k = 0; k < 4000; ++k) a.push_back(s.norm(s.sample_uniform(rng)));
  while (b.size() < 4000) {
    const double x = 2.0 * uniform01(oracle_rng) - 1.0;
    const double y = 2.0 * uniform01(oracle_rng) - 1.0;
    const double r2 = x * x + y * y;
    if (r2 >= rho_max * rho_max) continue;
    if (uniform01(oracle_rng) * peak < 4.0 / std::pow(1.0 - r2, 2)) b.push_back(2.0 * std::atanh(std::sqrt(r2)));
  }
  EXPECT_GT(ks_two_sample(a, b).pvalue, 0.01);
}

TEST(Space, TranslationsAreIsometries) {
  Rng rng(3);
  for (const char* d : {"torus2:10", "cyl:10:9", "torus3:5"}) {
    const Space s = Space::parse(d);
    Displacement g;
    g.v = {3.7, 1.2, 0.4};
    if (s.dim() < 3) g.v[2] = 0.0;
    if (s.dim() < 2) g.v[1] = 0.0;
    if (s.has_levels()) g.levels = 4;
    for (int k = 0; k < 200; ++k) {
      const Point a = s.sample_uniform(rng), b = s.sample_uniform(rng);
      EXPECT_NEAR(s.distance(a, b), s.distance(s.translate(g, a), s.translate(g, b)), 1e-9) << d;
    }
  }
}

TEST(Space, RecenterIsAnIsometryTakingRootToOrigin) {
  Rng rng(4);
  for (const char* d : {"torus2:10", "hyp:3:1", "cyl:10:9"}) {
    const Space s = Space::parse(d);
    for (int k = 0; k < 200; ++k) {
      const Point root = s.sample_uniform(rng), a = s.sample_uniform(rng), b = s.sample_uniform(rng);
      EXPECT_NEAR(s.norm(s.recenter(root, root)), 0.0, 1e-9);
      EXPECT_NEAR(s.distance(a, b), s.distance(s.recenter(root, a), s.recenter(root, b)),
                  1e-7 * (1.0 + s.distance(a, b)))
          << d;
    }
  }
}

TEST(Space, HyperbolicRejectsNonRotations) {
  const Space s = Space::hyperbolic(2.0, 0.5);
  Displacement g;
  g.v = {0.1, 0, 0};
  EXPECT_THROW(s.translate(g, Point{}), SpaceError);
  Displacement rot;
  rot.angle = 1.0;
  const Point p{{0.3, 0.1, 0}};
  EXPECT_NEAR(s.norm(s.translate(rot, p)), s.norm(p), 1e-12);
}

TEST(Region, BallVolumes) {
  EXPECT_NEAR(Region::ball(Point{}, 1.0).volume(Space::torus(2, 10)), std::numbers::pi, 1e-12);
  EXPECT_NEAR(Region::ball(Point{}, 1.0).volume(Space::torus(3, 10)), 4.0 / 3.0 * std::numbers::pi, 1e-12);
  // chords at levels 0 and +-1
  EXPECT_NEAR(Region::ball(Point{}, 1.5).volume(Space::cylinder(20, 40)), 3.0 + 4.0 * std::sqrt(1.25), 1e-12);
  EXPECT_NEAR(Region::ball(Point{}, 1.0).volume(Space::hyperbolic(3, 1)), hyperbolic_area_oracle(1.0), 1e-9);
}

TEST(Region, BoxesAndDisjointness) {
  const Space s = Space::cylinder(20, 40);
  const Region a = Region::box({0, 0, 0}, {1, 0, 0}, 0, 0);
  const Region b = Region::box({3, 0, 0}, {4, 0, 0}, 0, 0);
  const Region c = Region::box({0.5, 0, 0}, {2, 0, 0}, 1, 2);
  EXPECT_DOUBLE_EQ(a.volume(s), 1.0);
  EXPECT_DOUBLE_EQ(c.volume(s), 3.0);
  EXPECT_TRUE(disjoint(s, a, b));
  EXPECT_TRUE(disjoint(s, a, c));
  EXPECT_FALSE(disjoint(s, a, Region::box({0.5, 0, 0}, {2, 0, 0}, 0, 1)));
  EXPECT_TRUE(a.contains(s, Point{{0.5, 0, 0}, 0}));
  EXPECT_FALSE(a.contains(s, Point{{0.5, 0, 0}, 1}));
}

TEST(Region, StatisticsWindowOfTheDiskIsEroded) {
  const Space s = Space::hyperbolic(3.0, 1.0);
  const Region w = Region::statistics_window(s);
  EXPECT_NEAR(w.volume(s), hyperbolic_disk_area(2.0), 1e-9);
  EXPECT_DOUBLE_EQ(Region::statistics_window(Space::torus(2, 10)).volume(Space::torus(2, 10)), 100.0);
}
