#include "contrastkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "contrastkit/error.hpp"
#include "contrastkit/injection.hpp"

namespace contrastkit {

namespace {

void check_pair(const ImageBuffer& a, const ImageBuffer& b) {
    if (!a.same_shape(b)) throw ValidationError("metric inputs differ in shape");
    if (a.empty()) throw ValidationError("metric inputs are empty");
}

}  // namespace

double psnr(const ImageBuffer& a, const ImageBuffer& b) {
    check_pair(a, b);
    double se = 0.0;
    const auto da = a.data();
    const auto db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) {
        const double d = static_cast<double>(da[i]) - db[i];
        se += d * d;
    }
    const double mse = se / static_cast<double>(da.size());
    if (mse == 0.0) return kPsnrCapDb;
    return std::min(kPsnrCapDb, 10.0 * std::log10(1.0 / mse));
}

double ssim(const ImageBuffer& a, const ImageBuffer& b) {
    check_pair(a, b);
    constexpr double c1 = (0.01 * 0.01);
    constexpr double c2 = (0.03 * 0.03);
    const int w = a.width();
    const int h = a.height();
    const int win_w = std::min(kSsimWindow, w);
    const int win_h = std::min(kSsimWindow, h);
    const double n = static_cast<double>(win_w) * win_h;
    double total = 0.0;
    for (int c = 0; c < a.channels(); ++c) {
        double acc = 0.0;
        long long windows = 0;
        for (int y0 = 0; y0 + win_h <= h; ++y0)
            for (int x0 = 0; x0 + win_w <= w; ++x0) {
                double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
                for (int y = y0; y < y0 + win_h; ++y)
                    for (int x = x0; x < x0 + win_w; ++x) {
                        const double va = a.at(x, y, c);
                        const double vb = b.at(x, y, c);
                        sa += va;
                        sb += vb;
                        saa += va * va;
                        sbb += vb * vb;
                        sab += va * vb;
                    }
                const double ma = sa / n;
                const double mb = sb / n;
                // Sample covariance, as in the reference implementation.
                const double norm = n > 1 ? n / (n - 1) : 1.0;
                const double va = (saa / n - ma * ma) * norm;
                const double vb = (sbb / n - mb * mb) * norm;
                const double cov = (sab / n - ma * mb) * norm;
                acc += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
                ++windows;
            }
        total += acc / static_cast<double>(windows);
    }
    return total / a.channels();
}

double spectral_angle(const ImageBuffer& a, const ImageBuffer& b) {
    check_pair(a, b);
    const int ch = a.channels();
    double acc = 0.0;
    for (int y = 0; y < a.height(); ++y)
        for (int x = 0; x < a.width(); ++x) {
            double dot = 0, na = 0, nb = 0;
            for (int c = 0; c < ch; ++c) {
                const double u = a.at(x, y, c);
                const double v = b.at(x, y, c);
                dot += u * v;
                na += u * u;
                nb += v * v;
            }
            if (na == 0.0 && nb == 0.0) continue;
            if (na == 0.0 || nb == 0.0) {
                acc += std::numbers::pi / 2;
                continue;
            }
            // atan2 of |a x b| and a.b is stable near 0 where acos is not.
            double cross2 = na * nb - dot * dot;
            if (ch == 3) {
                const double u0 = a.at(x, y, 0), u1 = a.at(x, y, 1), u2 = a.at(x, y, 2);
                const double v0 = b.at(x, y, 0), v1 = b.at(x, y, 1), v2 = b.at(x, y, 2);
                const double k0 = u1 * v2 - u2 * v1, k1 = u2 * v0 - u0 * v2, k2 = u0 * v1 - u1 * v0;
                cross2 = k0 * k0 + k1 * k1 + k2 * k2;
            }
            acc += std::atan2(std::sqrt(std::max(0.0, cross2)), dot);
        }
    return acc / static_cast<double>(a.pixel_count());
}

double asset_contrast(const ImageBuffer& img, const DesignAsset& asset) {
    const Rect box = clip_rect(asset.bbox, img.width(), img.height());
    if (box.area() == 0) throw ValidationError("asset '" + asset.id + "' lies outside the image");
    const ColorRGB mean = region_mean_color(img, rect_mask(box, img.width(), img.height()));
    return contrast_ratio(asset.color, mean);
}

MetricsReport compute_metrics(const ImageBuffer& original, const ImageBuffer& edited, const DesignAsset& asset) {
    check_pair(original, edited);
    return {psnr(original, edited), ssim(original, edited), spectral_angle(original, edited),
            asset_contrast(original, asset), asset_contrast(edited, asset)};
}

}  // namespace contrastkit
