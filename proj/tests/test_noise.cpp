#include <doctest.h>

#include "contrastkit/error.hpp"
#include "contrastkit/noise.hpp"

using namespace contrastkit;

TEST_SUITE("noise") {

TEST_CASE("range and shape") {
    const ImageBuffer n = fractal_noise(37, 23, 4, 5);
    CHECK(n.width() == 37);
    CHECK(n.height() == 23);
    CHECK(n.channels() == 1);
    for (float v : n.data()) {
        CHECK(v >= 0.0f);
        CHECK(v <= 1.0f);
    }
}

TEST_CASE("deterministic per seed") {
    CHECK(fractal_noise(64, 64, 5, 42) == fractal_noise(64, 64, 5, 42));
    CHECK_FALSE(fractal_noise(64, 64, 5, 42) == fractal_noise(64, 64, 5, 43));
}

TEST_CASE("single octave is smooth") {
    const ImageBuffer n = fractal_noise(128, 128, 1, 3);
    // 8 cells over 128 px: neighbouring samples differ by at most ~1.5/16.
    for (int y = 0; y < 128; ++y)
        for (int x = 1; x < 128; ++x) CHECK(std::abs(n.at(x, y) - n.at(x - 1, y)) < 0.1f);
}

TEST_CASE("sample mean near one half") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const ImageBuffer n = fractal_noise(256, 256, 5, seed);
        double acc = 0;
        for (float v : n.data()) acc += v;
        const double mean = acc / static_cast<double>(n.pixel_count());
        CHECK(mean >= 0.4);
        CHECK(mean <= 0.6);
    }
}

TEST_CASE("invalid arguments") {
    CHECK_THROWS_AS(fractal_noise(0, 4, 1, 1), ValidationError);
    CHECK_THROWS_AS(fractal_noise(4, 4, 0, 1), ValidationError);
}

}
