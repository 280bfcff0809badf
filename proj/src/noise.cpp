#include "contrastkit/noise.hpp"

#include <algorithm>
#include <cmath>

#include "contrastkit/error.hpp"
#include "contrastkit/rng.hpp"

namespace contrastkit {

namespace {

double lattice(std::uint64_t seed, int octave, long long ix, long long iy) {
    const std::uint64_t h = hash_combine(hash_combine(seed, static_cast<std::uint64_t>(octave)),
                                         hash_combine(static_cast<std::uint64_t>(ix), static_cast<std::uint64_t>(iy)));
    return to_unit(h);
}

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

}  // namespace

ImageBuffer fractal_noise(int w, int h, int octaves, std::uint64_t seed) {
    if (w < 1 || h < 1 || octaves < 1) throw ValidationError("fractal noise needs positive size and octaves");
    ImageBuffer out(w, h, 1);
    const double extent = std::max(w, h);
    double amp_sum = 0.0;
    for (int o = 0; o < octaves; ++o) amp_sum += std::ldexp(1.0, -o);

    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int o = 0; o < octaves; ++o) {
                const double cells = kNoiseBaseCells * std::ldexp(1.0, o);
                const double fx = (x + 0.5) / extent * cells;
                const double fy = (y + 0.5) / extent * cells;
                const auto ix = static_cast<long long>(std::floor(fx));
                const auto iy = static_cast<long long>(std::floor(fy));
                const double tx = smoothstep(fx - static_cast<double>(ix));
                const double ty = smoothstep(fy - static_cast<double>(iy));
                const double v00 = lattice(seed, o, ix, iy);
                const double v10 = lattice(seed, o, ix + 1, iy);
                const double v01 = lattice(seed, o, ix, iy + 1);
                const double v11 = lattice(seed, o, ix + 1, iy + 1);
                const double top = v00 + (v10 - v00) * tx;
                const double bot = v01 + (v11 - v01) * tx;
                acc += std::ldexp(top + (bot - top) * ty, -o);
            }
            out.at(x, y) = static_cast<float>(std::clamp(acc / amp_sum, 0.0, 1.0));
        }
    return out;
}

}  // namespace contrastkit
