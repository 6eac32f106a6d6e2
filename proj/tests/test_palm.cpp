#include <gtest/gtest.h>

#include <cmath>

#include "ipp/palm.hpp"
#include "ipp/process.hpp"

using namespace ipp;

TEST(Reroot, RootMovesToOrigin) {
  Rng rng(1);
  const Space s = Space::torus(2, 10);
  const Configuration c = sample_poisson(s, 1.0, rng);
  ASSERT_GT(c.size(), 3u);
  const RootedSample r = reroot(c, 2);
  EXPECT_EQ(r.config.size(), c.size());
  EXPECT_NEAR(s.norm(r.config.points[r.origin_index]), 0.0, 1e-12);
  EXPECT_EQ(r.root, c.points[2]);
  for (std::size_t k = 0; k < c.size(); ++k) {
    EXPECT_NEAR(s.norm(r.config.points[k]), s.distance(c.points[2], c.points[r.ids[k]]), 1e-9);
  }
}

TEST(PalmExpectation, ConstantOneAndNearestNeighbourMean) {
  const ProcessSpec p = poisson_process(Space::torus(2, 10), 1.0);
  const auto one = estimate_palm_expectation(p, constant_one(), 2000, 3);
  EXPECT_NEAR(one.value, 1.0, 4.0 * one.stderr_ + 1e-12);
  const auto nn = estimate_palm_expectation(p, nearest_neighbour_distance(3.0), 2000, 3);
  EXPECT_NEAR(nn.value, 0.5, 4.0 * nn.stderr_);
  const auto ball = estimate_palm_expectation(p, count_in_ball(1.0), 2000, 3);
  EXPECT_NEAR(ball.value, std::numbers::pi, 4.0 * ball.stderr_);
}

TEST(PalmExpectation, LatticeIsDeterministic) {
  const ProcessSpec p = lattice_shift_process(Space::torus(2, 16), 1.0);
  const auto nn = estimate_palm_expectation(p, nearest_neighbour_distance(3.0), 20, 4);
  EXPECT_NEAR(nn.value, 1.0, 1e-9);
  EXPECT_NEAR(nn.stderr_, 0.0, 1e-9);
  const auto ball = estimate_palm_expectation(p, count_in_ball(1.0 + 1e-6), 20, 4);
  EXPECT_NEAR(ball.value, 4.0, 1e-9);
}

TEST(PalmExpectation, RatioEstimatorWithoutKnownIntensity) {
  const ProcessSpec p = parse_process(Space::torus(2, 10), "poisson:1|dthin:0.3");
  EXPECT_FALSE(p.intensity);
  const auto one = estimate_palm_expectation(p, constant_one(), 500, 5);
  EXPECT_NEAR(one.value, 1.0, 1e-12);
}

TEST(PalmRoot, SizeBiasedCounts) {
  const Space s = Space::torus(2, 5);
  const ProcessSpec p = poisson_process(s, 1.0);
  const Region w = Region::statistics_window(s);
  RunningStats st;
  for (std::size_t r = 0; r < 4000; ++r) {
    Rng rng = make_stream(6, r, StreamRole::Base);
    st.add(static_cast<double>(sample_palm_root(p, w, 1e300, rng).config.size()));
  }
  EXPECT_NEAR(st.mean(), 26.0, 4.0 * st.standard_error());
}

TEST(MeckeSlivnyak, PassesForPoisson) {
  const auto rep = verify_mecke_slivnyak(1.0, Space::torus(2, 20), nearest_neighbour_distance(3.0), 2000, 7);
  EXPECT_TRUE(rep.passed) << rep.csv_row();
  const auto counts = verify_mecke_slivnyak(0.5, Space::torus(2, 20), count_in_ball(1.5), 1000, 8);
  EXPECT_TRUE(counts.passed) << counts.csv_row();
}

TEST(MeckeSlivnyak, EdgeCases) {
  EXPECT_TRUE(verify_mecke_slivnyak(0.0, Space::torus(2, 20), nearest_neighbour_distance(3.0), 100, 1).passed);
  EXPECT_THROW(verify_mecke_slivnyak(1.0, Space::torus(2, 20), nearest_neighbour_distance(3.0), 99, 1),
               std::invalid_argument);
}

TEST(Clmm, HoldsForPoissonAndAThickening) {
  const Space s = Space::torus(2, 10);
  const auto f = window_ball_count_functional(s, 1.0, 5.0);
  const auto a = verify_clmm(poisson_process(s, 1.0), f, 2000, 9);
  EXPECT_TRUE(a.passed) << a.csv_row();
  const auto b = verify_clmm(parse_process(s, "poisson:0.5|thicken:0,0;0.4,0"), f, 2000, 10);
  EXPECT_TRUE(b.passed) << b.csv_row();
}

TEST(Clmm, RejectsNonLocalFunctionals) {
  const Space s = Space::torus(2, 10);
  EXPECT_THROW(verify_clmm(poisson_process(s, 1.0), window_ball_count_functional(s, 6.0, 5.0), 100, 1),
               std::invalid_argument);
  EXPECT_THROW(verify_clmm(poisson_process(Space::hyperbolic(2, 1), 1.0),
                           window_ball_count_functional(s, 1.0, 5.0), 100, 1),
               std::invalid_argument);
}

TEST(Mtp, ExactOnTori) {
  const Space s = Space::torus(2, 10);
  const ProcessSpec thick = parse_process(s, "poisson:1|thicken:0,0;0.3,0");
  for (const Transport& t : {ball_transport(1.0), nearest_neighbour_transport(2.0), spawn_transport(2.0)}) {
    const auto rep = verify_mtp(thick, t, 50, 11);
    EXPECT_TRUE(rep.passed) << t.name;
    EXPECT_TRUE(rep.exact);
    EXPECT_LT(rep.max_relative_error, 1e-9);
  }
}

TEST(Mtp, FreeBoundaryDisk) {
  const ProcessSpec p = poisson_process(Space::hyperbolic(3.0, 1.0), 1.0);
  const auto rep = verify_mtp(p, ball_transport(0.5), 400, 12);
  EXPECT_FALSE(rep.exact);
  EXPECT_TRUE(rep.passed) << rep.mean_out << " vs " << rep.mean_in;
}

TEST(Mtp, TranslationProbeRejectsNonEquivariantTransport) {
  Transport absolute{"absolute",
                     [](const RootedSample& view, std::size_t, std::size_t) { return view.root.x[0] > 5.0 ? 1.0 : 0.0; },
                     1.0};
  EXPECT_THROW(verify_mtp(poisson_process(Space::torus(2, 10), 1.0), absolute, 10, 1), std::exception);
}

TEST(PalmOfThickening, MatchesThickenedAdjoinedPoisson) {
  const Space s = Space::torus(2, 20);
  const auto f = parse_offsets(s, "0,0;0.5,0;0,0.7");
  const auto rep = verify_palm_of_thickening(poisson_process(s, 0.5), f, nearest_neighbour_distance(3.0), 1000, 13);
  EXPECT_TRUE(rep.passed) << rep.csv_row();
}
