#pragma once

#include <cstdint>

#include "ipp/configuration.hpp"

namespace ipp {

/// Marks are carried as 16-bit codes; quantize_mark/dequantize_mark are
/// exact inverses on the code grid.
std::uint16_t quantize_mark(double mark);
double dequantize_mark(std::uint16_t code);

/// Unmarking by local encoding. Each point g of a delta-separated marked
/// configuration gets a satellite pattern on the first coordinate axis
/// inside B(g, delta/100), with nothing closer than delta/200 to g:
///   an anchor at -0.9 * s, and one satellite at +(0.55 + 0.025 k) * s for
///   every set bit k of the 16-bit mark code, with s = delta / 100.
/// Centres are emitted first, in input order, followed by satellites.
Configuration encode_marks(const Configuration& config, double delta);

/// Inverse of encode_marks: recovers centres in their original order and
/// their dequantized marks. Throws if the input is not an encoding.
Configuration decode_marks(const Configuration& encoded, double delta);

}  // namespace ipp
