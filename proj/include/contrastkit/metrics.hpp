#pragma once

#include "contrastkit/design.hpp"
#include "contrastkit/image.hpp"

namespace contrastkit {

constexpr double kPsnrCapDb = 100.0;
constexpr int kSsimWindow = 7;

struct MetricsReport {
    double psnr_db = 0.0;
    double ssim = 0.0;
    double sam_radians = 0.0;
    double contrast_before = 1.0;
    double contrast_after = 1.0;
};

// Peak 1.0; identical images and anything above the cap report the cap.
double psnr(const ImageBuffer& a, const ImageBuffer& b);
// Mean SSIM over all fully contained 7x7 uniform windows, averaged over
// channels. Images smaller than the window are compared as one window.
double ssim(const ImageBuffer& a, const ImageBuffer& b);
// Mean per-pixel angle between RGB vectors; a zero vector against a zero
// vector counts as 0, against a non-zero vector as pi/2.
double spectral_angle(const ImageBuffer& a, const ImageBuffer& b);
// WCAG ratio of the asset color against the mean color under its bbox.
double asset_contrast(const ImageBuffer& img, const DesignAsset& asset);

// Throws ValidationError on shape mismatch.
MetricsReport compute_metrics(const ImageBuffer& original, const ImageBuffer& edited, const DesignAsset& asset);

}  // namespace contrastkit
