#include <doctest.h>

#include <cmath>

#include "contrastkit/error.hpp"
#include "contrastkit/patches.hpp"
#include "contrastkit/rng.hpp"
#include "oracles/quilt_oracle.hpp"

using namespace contrastkit;

namespace {

ImageBuffer uniform_noise(int w, int h, std::uint64_t seed) {
    SplitMix64 rng(seed);
    ImageBuffer img(w, h, 3);
    for (float& v : img.data()) v = static_cast<float>(rng.uniform());
    return img;
}

PatchSet random_patches(int count, int b, std::uint64_t seed) {
    PatchSet set;
    set.block_size = b;
    for (int k = 0; k < count; ++k) {
        set.patches.push_back(uniform_noise(b, b, seed * 131 + k));
        set.source_positions.push_back({0, 0});
    }
    return set;
}

// Recomputes the two gates straight from the pixels.
bool passes_gates(const ImageBuffer& p, const ColorRGB& asset) {
    const double n = static_cast<double>(p.pixel_count());
    double mean[3] = {0, 0, 0};
    for (int y = 0; y < p.height(); ++y)
        for (int x = 0; x < p.width(); ++x)
            for (int c = 0; c < 3; ++c) mean[c] += p.at(x, y, c) / n;
    for (int c = 0; c < 3; ++c) {
        double ss = 0;
        for (int y = 0; y < p.height(); ++y)
            for (int x = 0; x < p.width(); ++x) ss += std::pow(p.at(x, y, c) - mean[c], 2);
        if (std::sqrt(ss / n) < 0.05) return false;
    }
    auto lin = [](double v) { return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4); };
    const double lp = 0.2126 * lin(mean[0]) + 0.7152 * lin(mean[1]) + 0.0722 * lin(mean[2]);
    const double la = 0.2126 * lin(asset.r) + 0.7152 * lin(asset.g) + 0.0722 * lin(asset.b);
    return (std::max(lp, la) + 0.05) / (std::min(lp, la) + 0.05) >= 4.5;
}

}  // namespace

TEST_SUITE("patches") {

TEST_CASE("flat image yields no patches") {
    const ImageBuffer white(64, 64, 3, 1.0f);
    const ColorRGB black{0, 0, 0};
    CHECK_THROWS_WITH_AS(mine_patches(white, std::span(&black, 1), 20, 16, 1), "no diffusion-friendly patches",
                         ValidationError);
}

TEST_CASE("mining rejects undersized images and bad parameters") {
    const ImageBuffer img = uniform_noise(10, 10, 1);
    const ColorRGB black{0, 0, 0};
    CHECK_THROWS_AS(mine_patches(img, std::span(&black, 1), 5, 11, 1), ValidationError);
    CHECK_THROWS_AS(mine_patches(img, std::span(&black, 1), 0, 4, 1), ValidationError);
}

TEST_CASE("noise image against a black asset") {
    const ImageBuffer img = uniform_noise(128, 128, 9);
    const ColorRGB black{0, 0, 0};
    const PatchSet set = mine_patches(img, std::span(&black, 1), 40, 25, 3);
    CHECK(set.patches.size() == 40);
    CHECK(set.block_size == 25);
    REQUIRE(set.source_positions.size() == set.patches.size());
    for (std::size_t k = 0; k < set.patches.size(); ++k) {
        CHECK(passes_gates(set.patches[k], black));
        const auto pos = set.source_positions[k];
        CHECK(set.patches[k] == crop(img, {pos.x, pos.y, 25, 25}));
    }
    // Mid-gray mean: luminance ~0.214, ratio ~5.3 against black.
    const double l = relative_luminance({0.5, 0.5, 0.5});
    CHECK((l + 0.05) / 0.05 == doctest::Approx(5.28).epsilon(0.01));
}

TEST_CASE("white asset needs dark patches") {
    ImageBuffer img = uniform_noise(128, 128, 4);
    for (int y = 0; y < 128; ++y)
        for (int x = 0; x < 64; ++x)
            for (int c = 0; c < 3; ++c) img.at(x, y, c) *= 0.4f;  // left half dark
    const ColorRGB white{1, 1, 1};
    const PatchSet set = mine_patches(img, std::span(&white, 1), 30, 16, 5);
    CHECK(!set.patches.empty());
    const double bound = 1.05 / 4.5 - 0.05;
    CHECK(bound == doctest::Approx(0.1833).epsilon(1e-3));
    for (const auto& p : set.patches) {
        CHECK(relative_luminance(patch_stats(p).mean) <= bound + 1e-12);
        CHECK(passes_gates(p, white));
    }
}

TEST_CASE("every asset color must be cleared") {
    const ImageBuffer img = uniform_noise(96, 96, 2);
    const std::vector<ColorRGB> both{{0, 0, 0}, {1, 1, 1}};
    CHECK_THROWS_AS(mine_patches(img, both, 10, 25, 1), ValidationError);
}

TEST_CASE("mining is deterministic in the seed") {
    const ImageBuffer img = uniform_noise(96, 96, 8);
    const ColorRGB black{0, 0, 0};
    const PatchSet a = mine_patches(img, std::span(&black, 1), 12, 20, 77);
    const PatchSet b = mine_patches(img, std::span(&black, 1), 12, 20, 77);
    CHECK(a.source_positions == b.source_positions);
}

TEST_CASE("overlap width") {
    CHECK(quilt_overlap(25) == 4);
    CHECK(quilt_overlap(12) == 2);
    CHECK(quilt_overlap(6) == 1);
    CHECK(quilt_overlap(2) == 0);
}

TEST_CASE("single patch tiles periodically") {
    const PatchSet set = random_patches(1, 8, 3);
    const ImageBuffer out = quilt_texture(set, 21, 13, 4);
    for (int y = 0; y < 13; ++y)
        for (int x = 0; x < 21; ++x)
            for (int c = 0; c < 3; ++c) CHECK(out.at(x, y, c) == set.patches[0].at(x % 8, y % 8, c));
}

TEST_CASE("quilting is deterministic") {
    const PatchSet set = random_patches(10, 12, 6);
    CHECK(quilt_texture(set, 50, 40, 9) == quilt_texture(set, 50, 40, 9));
    CHECK_THROWS_AS(quilt_texture(PatchSet{}, 10, 10, 1), ValidationError);
}

TEST_CASE("DP seam matches exhaustive path search") {
    SplitMix64 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const int rows = 6 + trial % 5;
        const int cols = 1 + trial % 4;
        std::vector<double> cost(static_cast<std::size_t>(rows) * cols);
        for (double& c : cost) c = rng.uniform();
        double total = 0;
        const auto path = min_error_path(cost, rows, cols, &total);
        CHECK(total == doctest::Approx(oracle::brute_force_min_path(cost, rows, cols)).epsilon(1e-12));
        double along = 0;
        for (int i = 0; i < rows; ++i) {
            along += cost[static_cast<std::size_t>(i) * cols + path[i]];
            if (i > 0) CHECK(std::abs(path[i] - path[i - 1]) <= 1);
        }
        CHECK(along == doctest::Approx(total).epsilon(1e-12));
    }
}

TEST_CASE("quilt provenance, replay and seam error") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const PatchSet set = random_patches(10, 25, seed);
        const QuiltResult q = quilt_texture_traced(set, 90, 70, seed);
        CHECK(q.overlap == 4);
        for (int y = 0; y < 70; ++y)
            for (int x = 0; x < 90; ++x) {
                const PixelSource& s = q.provenance[static_cast<std::size_t>(y) * 90 + x];
                REQUIRE(s.patch >= 0);
                for (int c = 0; c < 3; ++c)
                    CHECK(q.image.at(x, y, c) == set.patches[static_cast<std::size_t>(s.patch)].at(s.x, s.y, c));
            }
        const auto replay = oracle::replay_quilt(set, q.tiles, 90, 70);
        CHECK(replay.image == q.image);
        double recorded = 0;
        for (const auto& t : q.tiles) recorded += t.vertical_cost + t.horizontal_cost;
        CHECK(recorded == doctest::Approx(replay.cut_ssd).epsilon(1e-9));
        CHECK(replay.cut_ssd <= replay.naive_ssd);
    }
}

}
