#pragma once

#include <cstdint>

#include "contrastkit/image.hpp"

namespace contrastkit {

inline constexpr int kNoiseBaseCells = 8;

// Seeded value-noise fBm (persistence 0.5, lacunarity 2), single channel in
// [0, 1]. The first octave has kNoiseBaseCells lattice cells across the longer
// side; lattice values are smoothstep-interpolated.
ImageBuffer fractal_noise(int w, int h, int octaves, std::uint64_t seed);

}  // namespace contrastkit
