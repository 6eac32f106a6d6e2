#include <gtest/gtest.h>

#include <sstream>

#include "ipp/graph.hpp"
#include "ipp/io.hpp"
#include "ipp/process.hpp"

using namespace ipp;

namespace {

Configuration roundtrip(const Configuration& c) {
  std::stringstream ss;
  write_configuration(ss, c);
  return read_configuration(ss);
}

}  // namespace

TEST(Ppc1, ExactRoundTripOnAllSpaces) {
  const char* spaces[] = {"torus1:20", "torus2:10", "torus3:3.3", "cyl:7:5", "cylR:4:2", "hyp:2:0.5"};
  for (std::size_t r = 0; r < 1000; ++r) {
    Rng rng = make_stream(1, r, StreamRole::Base);
    const Space s = Space::parse(spaces[r % 6]);
    Configuration c = sample_poisson(s, 0.8, rng);
    if (r % 2) c = iid_mark(std::move(c), rng);
    const Configuration back = roundtrip(c);
    ASSERT_TRUE(back.space == c.space);
    ASSERT_EQ(back.marked, c.marked);
    ASSERT_EQ(back.points, c.points) << spaces[r % 6];
  }
}

TEST(Ppc1, CommentsAreIgnored) {
  std::stringstream ss("# header comment\nPPC1 torus2:10 marked=0 n=1\n# between\n1.5 2.5\n");
  const Configuration c = read_configuration(ss);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.points[0].x[1], 2.5);
}

TEST(Ppc1, ErrorsCarryLineNumbers) {
  auto message = [](const std::string& text) {
    std::stringstream ss(text);
    try {
      read_configuration(ss);
    } catch (const FormatError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("PPC1 torus2:10 marked=0 n=3\n1 1\n2 2\n").find("line 3"), std::string::npos);
  EXPECT_NE(message("PPC1 torus2:10 marked=0 n=1\n1 1 0.5\n").find("line 2"), std::string::npos);
  EXPECT_NE(message("PPC1 torus2:10 marked=1 n=1\n1 1\n").find("line 2"), std::string::npos);
  EXPECT_NE(message("PPC2 torus2:10 marked=0 n=0\n").find("line 1"), std::string::npos);
  EXPECT_NE(message("PPC1 torus2:10 marked=0 n=1\n11 1\n").find("line"), std::string::npos);
  EXPECT_NE(message("PPC1 torus2:10 marked=0 n=1\nx 1\n").find("line 2"), std::string::npos);
  EXPECT_NE(message("").find("line"), std::string::npos);
}

TEST(Ppg1, RoundTrip) {
  Rng rng(2);
  const Configuration c = sample_poisson(Space::torus(2, 10), 1.0, rng);
  const FactorGraph g = distance_graph(c, 1.2);
  std::stringstream ss;
  write_graph(ss, c, g);
  const auto [c2, g2] = read_graph(ss);
  EXPECT_EQ(c2.points, c.points);
  EXPECT_EQ(g2.edges, g.edges);
  std::stringstream bad("PPG1 n=1 m=1\nPPC1 torus2:10 marked=0 n=1\n1 1\n0 3\n");
  EXPECT_THROW(read_graph(bad), FormatError);
}

TEST(Svg, WellFormedOutline) {
  Rng rng(3);
  for (const char* d : {"torus2:10", "torus1:10", "cyl:10:5", "hyp:2:0.5"}) {
    Configuration c = iid_mark(sample_poisson(Space::parse(d), 1.0, rng), rng);
    std::optional<FactorGraph> g;
    if (Space::parse(d).periodic()) g = distance_graph(c, 1.0);
    const std::string svg = render_svg(c, g);
    EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    std::size_t circles = 0;
    for (std::size_t pos = svg.find("<circle"); pos != std::string::npos; pos = svg.find("<circle", pos + 1)) ++circles;
    EXPECT_GE(circles, c.size());
  }
}
