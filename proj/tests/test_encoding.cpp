#include <gtest/gtest.h>

#include "ipp/checks.hpp"
#include "ipp/encoding.hpp"
#include "ipp/process.hpp"

using namespace ipp;

TEST(Encoding, QuantizationIsExactOnTheGrid) {
  for (int code = 0; code < 65536; code += 37) {
    EXPECT_EQ(quantize_mark(dequantize_mark(static_cast<std::uint16_t>(code))), code);
  }
  EXPECT_EQ(quantize_mark(0.0), 0);
  EXPECT_EQ(quantize_mark(1.0), 65535);
}

TEST(Encoding, RoundTripOnSeparatedConfigurations) {
  for (const char* d : {"torus2:10", "torus1:30", "torus3:4"}) {
    const auto rep = encoding_roundtrip_check(Space::parse(d), 1.0, 0.5, 100, 13);
    EXPECT_TRUE(rep.passed) << d;
    EXPECT_GT(rep.metric("points"), 0.0);
  }
}

TEST(Encoding, EncodedConfigurationIsUnmarkedAndLarger) {
  Rng rng(2);
  const Space s = Space::torus(2, 10);
  Configuration c = iid_mark(delta_thin(sample_poisson(s, 1.0, rng), 1.0), rng);
  const Configuration e = encode_marks(c, 1.0);
  EXPECT_FALSE(e.marked);
  EXPECT_GT(e.size(), c.size());
  for (std::size_t k = 0; k < c.size(); ++k) EXPECT_EQ(e.points[k].x, c.points[k].x);
}

TEST(Encoding, RejectsBadInputs) {
  Rng rng(3);
  const Space s = Space::torus(2, 10);
  const Configuration raw = sample_poisson(s, 1.0, rng);
  EXPECT_THROW(encode_marks(raw, 1.0), ConfigurationError);  // unmarked
  Configuration crowded;
  crowded.space = s;
  crowded.marked = true;
  crowded.points = {Point{{1, 1, 0}, 0, 0.5}, Point{{1.5, 1, 0}, 0, 0.5}};
  EXPECT_THROW(encode_marks(crowded, 1.0), ConfigurationError);
  // an arbitrary Poisson sample is not an encoding
  EXPECT_THROW(decode_marks(raw, 1.0), ConfigurationError);
}
