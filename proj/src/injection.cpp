#include "contrastkit/injection.hpp"

#include <algorithm>
#include <cmath>

#include "contrastkit/error.hpp"

namespace contrastkit {

namespace {

bool member(const Mask& m, int x, int y) { return m.at(x, y) > 0.5f; }

void check_region(const ImageBuffer& img, const Mask& region) {
    if (region.width() != img.width() || region.height() != img.height() || region.channels() != 1)
        throw ValidationError("region mask does not match image");
}

ColorRGB pixel(const ImageBuffer& img, int x, int y) {
    return {img.at(x, y, 0), img.at(x, y, 1), img.at(x, y, 2)};
}

void store(ImageBuffer& img, int x, int y, const ColorRGB& c) {
    img.at(x, y, 0) = static_cast<float>(c.r);
    img.at(x, y, 1) = static_cast<float>(c.g);
    img.at(x, y, 2) = static_cast<float>(c.b);
}

}  // namespace

CalibrationParams::CalibrationParams(double min_inj, double max_inj) : min_(min_inj), max_(max_inj) {
    if (!(min_inj > 0.0 && min_inj < max_inj && max_inj <= 1.0))
        throw ValidationError("calibration requires 0 < min < max <= 1");
    alpha_ = 1.0 / min_inj;
    beta_ = alpha_ - 1.0 / max_inj;
}

double luminance_delta(const ColorRGB& asset, const ColorRGB& region_mean, const CalibrationParams& cal) noexcept {
    const double la = relative_luminance(asset);
    const double lb = relative_luminance(region_mean);
    const double sign = la - 0.5 < 0.0 ? -1.0 : 1.0;
    return sign / (cal.alpha() - cal.beta() * std::fabs(la - lb));
}

ImageBuffer apply_luminance(const ImageBuffer& img, const Mask& region, double delta) {
    check_region(img, region);
    ImageBuffer out = img;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            if (!member(region, x, y)) continue;
            ColorLab lab = rgb_to_lab(pixel(img, x, y));
            lab.l = std::clamp(lab.l - delta * 100.0, 0.0, 100.0);
            store(out, x, y, lab_to_rgb(lab).clamped());
        }
    return out;
}

bool in_hsv_neighborhood(const ColorHSV& px, const ColorHSV& center, const HsvTolerance& tol) noexcept {
    double dh = std::fabs(px.h - center.h);
    dh = std::min(dh, 360.0 - dh);
    return dh <= tol.hue_deg && std::fabs(px.s - center.s) <= tol.sat && std::fabs(px.v - center.v) <= tol.val;
}

double hsv_neighborhood_fraction(std::span<const ColorRGB> pixels, const ColorRGB& c, const HsvTolerance& tol) {
    if (pixels.empty()) throw ValidationError("color neighborhood of an empty region");
    const ColorHSV center = rgb_to_hsv(c);
    std::size_t inside = 0;
    for (const auto& p : pixels)
        if (in_hsv_neighborhood(rgb_to_hsv(p), center, tol)) ++inside;
    return static_cast<double>(inside) / static_cast<double>(pixels.size());
}

double hsv_neighborhood_fraction(const ImageBuffer& img, const Mask& region, const ColorRGB& c,
                                 const HsvTolerance& tol) {
    check_region(img, region);
    std::vector<ColorRGB> pixels;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            if (member(region, x, y)) pixels.push_back(pixel(img, x, y));
    return hsv_neighborhood_fraction(pixels, c, tol);
}

double color_injection_weight(double frac, const CalibrationParams& cal) noexcept {
    return 1.0 / (cal.alpha() - cal.beta() * frac);
}

std::vector<SegmentedObject> select_objects(std::span<const SegmentedObject> objs) {
    std::vector<SegmentedObject> kept;
    for (const auto& o : objs)
        if (o.confidence >= kMinObjectConfidence && o.area_fraction >= kMinObjectCoverage) kept.push_back(o);
    return kept;
}

std::vector<SegmentedObject> segment_region(const ImageBuffer& img, const Mask& region, double min_fraction) {
    check_region(img, region);
    const int w = img.width();
    const int h = img.height();
    const std::size_t total = region_size(region);
    std::vector<SegmentedObject> out;
    if (total == 0) return out;

    auto label_of = [&](int x, int y) {
        int label = 0;
        for (int c = 0; c < 3; ++c) label = label * 4 + std::min(3, static_cast<int>(img.at(x, y, c) * 4.0f));
        return label;
    };

    std::vector<int> component(static_cast<std::size_t>(w) * h, -1);
    std::vector<std::pair<int, int>> stack;
    int next = 0;
    for (int y0 = 0; y0 < h; ++y0)
        for (int x0 = 0; x0 < w; ++x0) {
            const std::size_t seed_idx = static_cast<std::size_t>(y0) * w + x0;
            if (!member(region, x0, y0) || component[seed_idx] >= 0) continue;
            const int label = label_of(x0, y0);
            std::vector<std::pair<int, int>> pixels;
            stack.assign(1, {x0, y0});
            component[seed_idx] = next;
            while (!stack.empty()) {
                const auto [x, y] = stack.back();
                stack.pop_back();
                pixels.emplace_back(x, y);
                constexpr int dx[4] = {1, -1, 0, 0};
                constexpr int dy[4] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    const int nx = x + dx[k];
                    const int ny = y + dy[k];
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                    const std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
                    if (component[ni] >= 0 || !member(region, nx, ny) || label_of(nx, ny) != label) continue;
                    component[ni] = next;
                    stack.emplace_back(nx, ny);
                }
            }
            ++next;
            const double fraction = static_cast<double>(pixels.size()) / static_cast<double>(total);
            if (fraction < min_fraction) continue;

            double mean[3] = {0, 0, 0}, sq[3] = {0, 0, 0};
            SegmentedObject obj{Mask(w, h, 1, 0.0f), 0.0, fraction};
            for (const auto& [x, y] : pixels) {
                obj.mask.at(x, y) = 1.0f;
                for (int c = 0; c < 3; ++c) {
                    mean[c] += img.at(x, y, c);
                    sq[c] += static_cast<double>(img.at(x, y, c)) * img.at(x, y, c);
                }
            }
            double std_sum = 0.0;
            for (int c = 0; c < 3; ++c) {
                const double m = mean[c] / static_cast<double>(pixels.size());
                std_sum += std::sqrt(std::max(0.0, sq[c] / static_cast<double>(pixels.size()) - m * m));
            }
            obj.confidence = std::clamp(1.0 - 2.0 * std_sum / 3.0, 0.0, 1.0);
            out.push_back(std::move(obj));
        }
    return out;
}

SegmentedObject from_external(const ExternalSegment& seg, const Mask& region) {
    if (!seg.mask.same_shape(region)) throw ValidationError("segmentation mask does not match canvas");
    if (!(seg.confidence >= 0.0 && seg.confidence <= 1.0)) throw ValidationError("segmentation confidence outside [0, 1]");
    const std::size_t total = region_size(region);
    std::size_t inside = 0;
    for (int y = 0; y < region.height(); ++y)
        for (int x = 0; x < region.width(); ++x)
            if (member(region, x, y) && member(seg.mask, x, y)) ++inside;
    SegmentedObject obj{seg.mask, seg.confidence, total ? static_cast<double>(inside) / static_cast<double>(total) : 0.0};
    return obj;
}

ImageBuffer apply_color_injection(const ImageBuffer& img, const Mask& region, std::span<const SegmentedObject> objs,
                                  const ColorRGB& c, double weight) {
    check_region(img, region);
    const auto selected = select_objects(objs);
    ImageBuffer out = img;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            if (!member(region, x, y)) continue;
            const bool in_object = std::any_of(selected.begin(), selected.end(),
                                               [&](const SegmentedObject& o) { return member(o.mask, x, y); });
            const double w = in_object ? weight : weight / 2.0;
            const ColorRGB p = pixel(img, x, y);
            store(out, x, y, ColorRGB{(1 - w) * p.r + w * c.r, (1 - w) * p.g + w * c.g, (1 - w) * p.b + w * c.b}.clamped());
        }
    return out;
}

double gaussian_mask_value(const Rect& bbox, double x, double y) noexcept {
    const double dx = (x - bbox.center_x()) / (bbox.w / 2.0);
    const double dy = (y - bbox.center_y()) / (bbox.h / 2.0);
    return std::exp(-0.5 * (dx * dx + dy * dy));
}

Mask gaussian_mask(const Rect& bbox, int canvas_w, int canvas_h) {
    if (bbox.w <= 0 || bbox.h <= 0 || clip_rect(bbox, canvas_w, canvas_h).area() == 0)
        throw ValidationError("mask bbox does not intersect the canvas");
    Mask m(canvas_w, canvas_h, 1, 0.0f);
    for (int y = 0; y < canvas_h; ++y)
        for (int x = 0; x < canvas_w; ++x) {
            const double v = gaussian_mask_value(bbox, x + 0.5, y + 0.5);
            m.at(x, y) = v < kGaussianMaskFloor ? 0.0f : static_cast<float>(v);
        }
    return m;
}

Mask asset_region(const DesignAsset& asset, int canvas_w, int canvas_h) {
    Mask region = rect_mask(asset.bbox, canvas_w, canvas_h);
    if (asset.raster_mask) {
        const Mask& rm = *asset.raster_mask;
        if (rm.width() != canvas_w || rm.height() != canvas_h)
            throw ValidationError("raster mask of asset '" + asset.id + "' does not match canvas");
        for (int y = 0; y < canvas_h; ++y)
            for (int x = 0; x < canvas_w; ++x)
                if (rm.at(x, y) <= 0.5f) region.at(x, y) = 0.0f;
    }
    return region;
}

std::size_t region_size(const Mask& region) noexcept {
    std::size_t n = 0;
    for (float v : region.data())
        if (v > 0.5f) ++n;
    return n;
}

ColorRGB region_mean_color(const ImageBuffer& img, const Mask& region) {
    check_region(img, region);
    double acc[3] = {0, 0, 0};
    std::size_t n = 0;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            if (!member(region, x, y)) continue;
            for (int c = 0; c < 3; ++c) acc[c] += img.at(x, y, c);
            ++n;
        }
    if (n == 0) throw ValidationError("mean color of an empty region");
    return {acc[0] / n, acc[1] / n, acc[2] / n};
}

}  // namespace contrastkit
