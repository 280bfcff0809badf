#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "contrastkit/image.hpp"
#include "contrastkit/rng.hpp"

namespace testutil {

class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("contrastkit-test-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

// Light, 8-bit-exact background with mild texture.
inline contrastkit::ImageBuffer light_background(int w, int h, std::uint64_t seed) {
    contrastkit::SplitMix64 rng(seed);
    contrastkit::ImageBuffer img(w, h, 3);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double base = 0.78 + 0.12 * x / double(w) + 0.06 * rng.uniform();
            img.at(x, y, 0) = float(base);
            img.at(x, y, 1) = float(base * 0.97);
            img.at(x, y, 2) = float(std::min(1.0, base * 1.03));
        }
    return contrastkit::quantize8(img);
}

}  // namespace testutil
