#pragma once

#include <filesystem>
#include <vector>

#include "contrastkit/image.hpp"

namespace contrastkit {

// Row-major attention raster in [0, 1]; its maximum is 1 unless the map is
// identically zero.
class SaliencyMap {
public:
    SaliencyMap() = default;
    SaliencyMap(int width, int height, std::vector<float> values);
    static SaliencyMap zeros(int width, int height);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    float at(int x, int y) const noexcept { return values_[static_cast<std::size_t>(y) * width_ + x]; }
    const std::vector<float>& values() const noexcept { return values_; }

    friend bool operator==(const SaliencyMap&, const SaliencyMap&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<float> values_;
};

// Rescales non-negative scores so the maximum is 1; all-zero input stays zero.
SaliencyMap normalize_saliency(int width, int height, std::vector<float> raw);

inline constexpr int kSpectralResidualSize = 64;
inline constexpr double kSpectralResidualSigma = 2.5;

// Box-averaged resampling of a single-channel raster.
ImageBuffer resample_area(const ImageBuffer& gray, int width, int height);
ImageBuffer to_gray(const ImageBuffer& rgb);

// Spectral-residual saliency of a kSpectralResidualSize square gray raster,
// smoothed and min-max normalized. Constant input yields zeros.
ImageBuffer spectral_residual(const ImageBuffer& gray_small);

// Spectral residual at 64x64, bilinearly upsampled to the input size.
SaliencyMap compute_saliency(const ImageBuffer& img);

// Centered anisotropic Gaussian prior on normalized coordinates (u, v in
// [0, 1]), sigma = sigma_frac of each side; 1 at the center.
double center_bias_factor(double u, double v, double sigma_frac = 0.3) noexcept;
SaliencyMap apply_center_bias(const SaliencyMap& m, double sigma_frac = 0.3);

// 8-bit single-channel PNG, 255 = maximal saliency.
SaliencyMap load_saliency_png(const std::filesystem::path& path);
SaliencyMap saliency_from_gray(const ImageBuffer& gray);

}  // namespace contrastkit
