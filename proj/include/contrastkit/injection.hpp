#pragma once

#include <span>
#include <vector>

#include "contrastkit/color.hpp"
#include "contrastkit/design.hpp"
#include "contrastkit/image.hpp"

namespace contrastkit {

// Injection range [min_inj, max_inj]; alpha = 1/min_inj, beta = alpha - 1/max_inj.
class CalibrationParams {
public:
    CalibrationParams() : CalibrationParams(0.2, 0.8) {}
    // Throws ValidationError unless 0 < min_inj < max_inj <= 1.
    CalibrationParams(double min_inj, double max_inj);

    double min_inj() const noexcept { return min_; }
    double max_inj() const noexcept { return max_; }
    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }

private:
    double min_;
    double max_;
    double alpha_;
    double beta_;
};

// Signed luminance injection for asset color `asset` over region mean
// `region_mean`: sgn(L(A) - 0.5) / (alpha - beta |L(A) - L(B)|), with the sign
// taken as +1 when L(A) is exactly 0.5.
double luminance_delta(const ColorRGB& asset, const ColorRGB& region_mean, const CalibrationParams& cal) noexcept;

// Shifts CIELAB L* of region pixels by -delta * 100 (a bright asset darkens
// its backdrop), clamping to the sRGB gamut. Pixels outside the region are
// copied untouched.
ImageBuffer apply_luminance(const ImageBuffer& img, const Mask& region, double delta);

struct HsvTolerance {
    double hue_deg = 18.0;
    double sat = 0.25;
    double val = 0.25;
};

bool in_hsv_neighborhood(const ColorHSV& px, const ColorHSV& center, const HsvTolerance& tol) noexcept;

// Fraction of region pixels whose HSV lies in the neighborhood of `c`.
// Throws ValidationError for an empty region.
double hsv_neighborhood_fraction(const ImageBuffer& img, const Mask& region, const ColorRGB& c,
                                 const HsvTolerance& tol = {});
double hsv_neighborhood_fraction(std::span<const ColorRGB> pixels, const ColorRGB& c, const HsvTolerance& tol = {});

// 1 / (alpha - beta * frac).
double color_injection_weight(double frac, const CalibrationParams& cal) noexcept;

struct SegmentedObject {
    Mask mask;  // canvas-sized, 1 = object
    double confidence = 0.0;
    double area_fraction = 0.0;  // object area / region area
};

inline constexpr double kMinObjectConfidence = 0.8;
inline constexpr double kMinObjectCoverage = 0.2;

std::vector<SegmentedObject> select_objects(std::span<const SegmentedObject> objs);

// Built-in stand-in segmenter: 4-connected components of the region quantized
// to 4 levels per channel. confidence = 1 - 2 * mean per-channel std. Components
// below `min_fraction` of the region are dropped.
std::vector<SegmentedObject> segment_region(const ImageBuffer& img, const Mask& region, double min_fraction = 0.05);

// Wraps an externally supplied mask, measuring coverage against `region`.
SegmentedObject from_external(const ExternalSegment& seg, const Mask& region);

// Inside selected objects (within the region) pixel <- (1-w) pixel + w C;
// remaining region pixels get the same blend at w / 2.
ImageBuffer apply_color_injection(const ImageBuffer& img, const Mask& region, std::span<const SegmentedObject> objs,
                                  const ColorRGB& c, double weight);

inline constexpr double kGaussianMaskFloor = 0.01;

// exp(-0.5 ((x-cx)/sx)^2 - 0.5 ((y-cy)/sy)^2) with (cx, cy) the bbox center and
// (sx, sy) = (w/2, h/2), at continuous canvas coordinates.
double gaussian_mask_value(const Rect& bbox, double x, double y) noexcept;

// Gaussian edit mask sampled at pixel centers; values below
// kGaussianMaskFloor are zeroed so the edit has bounded support.
Mask gaussian_mask(const Rect& bbox, int canvas_w, int canvas_h);

// Region of an asset: its bbox, intersected with the raster mask if present.
Mask asset_region(const DesignAsset& asset, int canvas_w, int canvas_h);

ColorRGB region_mean_color(const ImageBuffer& img, const Mask& region);
std::size_t region_size(const Mask& region) noexcept;

}  // namespace contrastkit
