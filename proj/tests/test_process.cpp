#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "ipp/neighbours.hpp"
#include "ipp/parallel.hpp"
#include "ipp/process.hpp"
#include "ipp/stats.hpp"

using namespace ipp;

TEST(Poisson, VoidProbabilityOfUnitDisk) {
  const Space s = Space::torus(2, 10);
  const std::size_t reps = 20000;
  const auto empty = map_replicas(reps, [&](std::size_t r) {
    Rng rng = make_stream(21, r, StreamRole::Base);
    const Configuration c = sample_poisson(s, 1.0, rng);
    for (const auto& p : c.points) {
      if (s.norm(p) <= 1.0) return 0.0;
    }
    return 1.0;
  });
  const double p = std::accumulate(empty.begin(), empty.end(), 0.0) / reps;
  const double oracle = std::exp(-std::numbers::pi);
  EXPECT_NEAR(p, oracle, 4.0 * std::sqrt(oracle * (1 - oracle) / reps));
}

TEST(Poisson, MeanNearestPointDistanceIsHalf) {
  const Space s = Space::torus(2, 10);
  RunningStats st;
  for (std::size_t r = 0; r < 10000; ++r) {
    Rng rng = make_stream(22, r, StreamRole::Base);
    const Configuration c = sample_poisson(s, 1.0, rng);
    double best = 1e9;
    for (const auto& p : c.points) best = std::min(best, s.norm(p));
    st.add(best);
  }
  EXPECT_NEAR(st.mean(), 0.5, 4.0 * st.standard_error());
}

TEST(Poisson, CountsFollowPoissonOnEverySpace) {
  for (const char* d : {"torus1:20", "torus3:3", "cyl:10:4", "cylR:5:4", "hyp:2:0.5"}) {
    const Space s = Space::parse(d);
    std::vector<std::size_t> counts;
    for (std::size_t r = 0; r < 3000; ++r) {
      Rng rng = make_stream(23, r, StreamRole::Base);
      counts.push_back(sample_poisson(s, 0.7, rng).size());
    }
    EXPECT_GT(poisson_gof(counts, 0.7 * s.volume()).pvalue, 0.001) << d;
  }
}

TEST(Poisson, ZeroIntensityIsEmptyAndLatticeSpaceRejected) {
  Rng rng(1);
  EXPECT_TRUE(sample_poisson(Space::torus(2, 10), 0.0, rng).empty());
  EXPECT_THROW(sample_poisson(Space::lattice(1.0), 1.0, rng), std::exception);
}

TEST(LatticeShift, CountAndSpacing) {
  Rng rng(2);
  const Configuration c = sample_lattice_shift(Space::torus(2, 16), 1.0, rng);
  EXPECT_EQ(c.size(), 256u);
  EXPECT_NEAR(min_pair_distance(c), 1.0, 1e-9);
  const Configuration d = sample_lattice_shift(Space::torus(2, 16), 4.0, rng);
  EXPECT_EQ(d.size(), 64u);
  EXPECT_THROW(sample_lattice_shift(Space::torus(2, 10), 9.0, rng), std::exception);
}

TEST(Marks, IidMarksOnceOnly) {
  Rng rng(3);
  Configuration c = iid_mark(sample_poisson(Space::torus(2, 5), 1.0, rng), rng);
  EXPECT_TRUE(c.marked);
  for (const auto& p : c.points) {
    EXPECT_GE(p.mark, 0.0);
    EXPECT_LT(p.mark, 1.0);
  }
  EXPECT_THROW(iid_mark(c, rng), ConfigurationError);
}

TEST(Thinning, PThinKeepsLowMarks) {
  Rng rng(4);
  const Configuration c = iid_mark(sample_poisson(Space::torus(2, 10), 1.0, rng), rng);
  const Configuration t = p_thin(c, 0.3);
  std::size_t expected = 0;
  for (const auto& p : c.points) expected += p.mark <= 0.3;
  EXPECT_EQ(t.size(), expected);
  EXPECT_FALSE(t.marked);
  EXPECT_EQ(p_thin(c, 0.0).size(), 0u);
  EXPECT_EQ(p_thin(c, 1.0).size(), c.size());
  EXPECT_THROW(p_thin(c, 1.5), ConfigurationError);
}

TEST(Thinning, DeltaThinIsSeparatedAndMaximalAmongIsolated) {
  Rng rng(5);
  const Configuration c = sample_poisson(Space::torus(2, 10), 1.0, rng);
  const Configuration t = delta_thin(c, 0.8);
  EXPECT_GT(min_pair_distance(t), 0.8);
  // every dropped point had a neighbour within delta in the input
  const auto nb = neighbours_within(c.space, c.points, 0.8);
  std::size_t isolated = 0;
  for (std::size_t i = 0; i < c.size(); ++i) isolated += nb.of(i).empty();
  EXPECT_EQ(t.size(), isolated);
}

TEST(Thickening, CountsProvenanceAndCollisions) {
  Rng rng(6);
  const Space s = Space::torus(2, 10);
  const Configuration c = delta_thin(sample_poisson(s, 1.0, rng), 1.0);
  const auto f = parse_offsets(s, "0,0;0.3,0;0,0.3");
  const Configuration t = constant_thicken(c, f);
  ASSERT_EQ(t.size(), 3 * c.size());
  ASSERT_EQ(t.provenance.parent.size(), t.size());
  std::size_t progenitors = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    progenitors += t.provenance.progenitor[k];
    EXPECT_NEAR(s.distance(t.points[k], c.points[t.provenance.parent[k]]), k % 3 == 0 ? 0.0 : 0.3, 1e-9);
  }
  EXPECT_EQ(progenitors, c.size());
  // a translate landing on another point is rejected
  Configuration two;
  two.space = s;
  two.points = {Point{{1, 1, 0}}, Point{{1.5, 1, 0}}};
  EXPECT_THROW(constant_thicken(two, parse_offsets(s, "0,0;0.5,0")), ConfigurationError);
  EXPECT_THROW(constant_thicken(c, parse_offsets(s, "0.1,0")), ConfigurationError);
}

TEST(Voronoi, NearestWithLexicographicTies) {
  Configuration c;
  c.space = Space::torus(2, 10);
  c.points = {Point{{2, 5, 0}}, Point{{4, 5, 0}}, Point{{8, 8, 0}}};
  EXPECT_EQ(voronoi_assign(c, Point{{2.4, 5, 0}}), 0u);
  EXPECT_EQ(voronoi_assign(c, Point{{7, 7, 0}}), 2u);
  // equidistant from 0 and 1: displacement to point 0 is (-1, 0), the smaller one
  EXPECT_EQ(voronoi_assign(c, Point{{3, 5, 0}}), 0u);
}

TEST(Glue, DeterministicPoissonOutput) {
  Rng rng(7);
  const Space s = Space::torus(2, 10);
  const Configuration c = iid_mark(sample_poisson(s, 0.3, rng), rng);
  const Configuration g = glue_poisson_in_cells(c, 2.0);
  EXPECT_EQ(g.points, glue_poisson_in_cells(c, 2.0).points);
  EXPECT_FALSE(g.marked);
  // a single cell is the whole window: the sample seeded by that mark
  Configuration one = c;
  one.points.resize(1);
  const Configuration whole = glue_poisson_in_cells(one, 2.0);
  EXPECT_GT(whole.size(), 100u);
  EXPECT_EQ(whole.size(), glue_poisson_in_cells(one, 2.0).size());
  Configuration empty = c;
  empty.points.clear();
  EXPECT_THROW(glue_poisson_in_cells(empty, 2.0), ConfigurationError);
}

TEST(Glue, OutputLawIsPoisson) {
  const Space s = Space::torus(2, 10);
  std::vector<std::size_t> counts;
  std::vector<double> left, right;
  for (std::size_t r = 0; r < 5000; ++r) {
    Rng rng = make_stream(9, r, StreamRole::Base);
    Configuration base = iid_mark(sample_poisson(s, 0.3, rng), rng);
    if (base.empty()) base = iid_mark(sample_poisson(s, 0.3, rng), rng);
    if (base.empty()) continue;
    const Configuration g = glue_poisson_in_cells(base, 1.0);
    counts.push_back(g.size());
    double l = 0, rr = 0;
    for (const auto& p : g.points) (p.x[0] < 5.0 ? l : rr) += 1.0;
    left.push_back(l);
    right.push_back(rr);
  }
  EXPECT_GT(poisson_gof(counts, 100.0).pvalue, 0.01);
  EXPECT_LT(std::abs(pearson_correlation(left, right)), 0.05);
}

TEST(Net, CoarselyDenseByGridProbe) {
  Rng rng(9);
  const Space s = Space::torus(2, 10);
  const Configuration c = sample_poisson(s, 0.1, rng);
  const double r = 1.0;
  const Configuration n = complete_to_net(c, r);
  for (std::size_t k = 0; k < c.size(); ++k) EXPECT_EQ(n.points[k], c.points[k]);
  // added points are R/2-separated from everything else
  for (std::size_t k = c.size(); k < n.size(); ++k) {
    for (std::size_t j = 0; j < n.size(); ++j) {
      if (j != k) EXPECT_GT(s.distance(n.points[k], n.points[j]), r / 2 - 1e-12);
    }
  }
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    for (int j = 0; j < 200; ++j) {
      const Point probe{{(i + 0.5) * 0.05, (j + 0.5) * 0.05, 0}};
      double best = 1e9;
      for (const auto& p : n.points) best = std::min(best, s.distance(probe, p));
      worst = std::max(worst, best);
    }
  }
  EXPECT_LE(worst, r);
  EXPECT_THROW(complete_to_net(c, 6.0), ConfigurationError);
}

TEST(Vertical, CouplingAndStraightening) {
  Rng rng(10);
  const Configuration base = sample_poisson(Space::torus(1, 20), 1.0, rng);
  const Configuration v = vertical_coupling(base, 8);
  ASSERT_EQ(v.size(), 8 * base.size());
  for (std::size_t l = 0; l < 8; ++l) {
    for (std::size_t i = 0; i < base.size(); ++i) {
      EXPECT_EQ(v.points[l * base.size() + i].x[0], base.points[i].x[0]);
      EXPECT_EQ(v.points[l * base.size() + i].level, static_cast<int>(l));
    }
  }
  const Space cyl = Space::cylinder(20, 40);
  const Configuration m = iid_poisson_process(cyl, 1.0).sample(rng);
  const Configuration one = straighten_phi_n(m, 1);
  EXPECT_EQ(one.size(), m.size());
  const Configuration five = straighten_phi_n(m, 5);
  std::size_t kept = 0;
  for (const auto& p : m.points) kept += p.mark <= 0.2;
  EXPECT_EQ(five.size(), 5 * kept);
  for (const auto& col : columns(five)) EXPECT_EQ(col.size() % 5, 0u);
  EXPECT_THROW(straighten_phi_n(m, 41), ConfigurationError);
  EXPECT_THROW(straighten_phi_n(vertical_coupling(base, 40), 2), ConfigurationError);
}

TEST(ProcessSpec, ParseAndIntensity) {
  const Space s = Space::torus(2, 10);
  const ProcessSpec a = parse_process(s, "poisson:2");
  ASSERT_TRUE(a.intensity);
  EXPECT_DOUBLE_EQ(*a.intensity, 2.0);
  const ProcessSpec b = parse_process(s, "iid_poisson:1|pthin:0.3");
  ASSERT_TRUE(b.intensity);
  EXPECT_DOUBLE_EQ(*b.intensity, 0.3);
  const ProcessSpec c = parse_process(s, "poisson:1|dthin:0.5|thicken:0,0;0.1,0");
  EXPECT_FALSE(c.intensity);
  const ProcessSpec d = parse_process(s, "lattice:4");
  EXPECT_DOUBLE_EQ(*d.intensity, 0.25);
  Rng rng(11);
  EXPECT_EQ(d.sample(rng).size(), 25u);
  EXPECT_THROW(parse_process(s, "gauss:1"), std::exception);
  EXPECT_THROW(parse_process(s, "poisson:1|explode:2"), std::exception);
  EXPECT_THROW(parse_process(s, "poisson:abc"), std::exception);
}

TEST(ProcessSpec, SameSeedSameSample) {
  const ProcessSpec p = parse_process(Space::torus(2, 10), "iid_poisson:1|pthin:0.5|thicken:0,0;0.2,0.1");
  Rng a = make_stream(5, 3, StreamRole::Base), b = make_stream(5, 3, StreamRole::Base);
  EXPECT_EQ(p.sample(a).points, p.sample(b).points);
}
