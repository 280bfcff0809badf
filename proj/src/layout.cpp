#include "contrastkit/layout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "contrastkit/error.hpp"

namespace contrastkit {

namespace {

constexpr double kTieEpsilon = 1e-12;

// Summed-area table of 1 - H.
class ComplementIntegral {
public:
    explicit ComplementIntegral(const SaliencyMap& h) : w_(h.width()), table_(static_cast<std::size_t>(h.width() + 1) * (h.height() + 1), 0.0) {
        for (int y = 0; y < h.height(); ++y) {
            double row = 0.0;
            for (int x = 0; x < w_; ++x) {
                row += 1.0 - static_cast<double>(h.at(x, y));
                at(x + 1, y + 1) = at(x + 1, y) + row;
            }
        }
    }

    double mean(const Rect& r) const {
        const double s = at(r.right(), r.bottom()) - at(r.x, r.bottom()) - at(r.right(), r.y) + at(r.x, r.y);
        return s / static_cast<double>(r.area());
    }

private:
    double& at(int x, int y) { return table_[static_cast<std::size_t>(y) * (w_ + 1) + x]; }
    double at(int x, int y) const { return table_[static_cast<std::size_t>(y) * (w_ + 1) + x]; }

    int w_;
    std::vector<double> table_;
};

}  // namespace

int layout_stride(int canvas_w, int canvas_h) noexcept {
    return std::max(1, std::min(canvas_w, canvas_h) / 32);
}

std::vector<int> candidate_offsets(int extent, int size, int stride) {
    std::vector<int> out;
    const int last = extent - size;
    if (last < 0) return out;
    for (int v = 0; v <= last; v += stride) out.push_back(v);
    if (out.back() != last) out.push_back(last);
    return out;
}

LayoutProposal propose_layout(const SaliencyMap& saliency, std::span<const DesignAsset> assets,
                              std::span<const Rect> fixed, const LayoutParams& params) {
    const int cw = saliency.width();
    const int ch = saliency.height();
    const int stride = params.stride > 0 ? params.stride : layout_stride(cw, ch);
    const double diagonal = std::hypot(static_cast<double>(cw), static_cast<double>(ch));

    for (const auto& a : assets) {
        if (a.bbox.w <= 0 || a.bbox.h <= 0) throw ValidationError("asset '" + a.id + "' has an empty size");
        if (a.bbox.w > cw || a.bbox.h > ch) throw ValidationError("asset exceeds canvas: '" + a.id + "'");
    }

    std::vector<std::size_t> order(assets.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        const auto ai = assets[i].bbox.area();
        const auto aj = assets[j].bbox.area();
        if (ai != aj) return ai > aj;
        return assets[i].id < assets[j].id;
    });

    const ComplementIntegral integral(saliency);
    std::vector<Rect> obstacles(fixed.begin(), fixed.end());
    LayoutProposal proposal;

    for (const std::size_t idx : order) {
        const DesignAsset& asset = assets[idx];
        const int w = asset.bbox.w;
        const int h = asset.bbox.h;

        bool have_free = false;
        Rect best_free;
        double best_free_score = -std::numeric_limits<double>::infinity();
        Rect best_any;
        double best_any_overlap = std::numeric_limits<double>::infinity();
        double best_any_score = -std::numeric_limits<double>::infinity();

        for (const int y : candidate_offsets(ch, h, stride)) {
            for (const int x : candidate_offsets(cw, w, stride)) {
                const Rect r{x, y, w, h};
                long long overlap = 0;
                for (const Rect& o : obstacles) overlap += intersection_area(r, o);
                const double overlap_frac = static_cast<double>(overlap) / static_cast<double>(r.area());

                double d_min = 0.0;
                if (!proposal.placements.empty()) {
                    d_min = std::numeric_limits<double>::infinity();
                    for (const auto& p : proposal.placements)
                        d_min = std::min(d_min, std::hypot(r.center_x() - p.bbox.center_x(), r.center_y() - p.bbox.center_y()));
                    d_min /= diagonal;
                }
                const double score = integral.mean(r) + params.dispersion_weight * d_min -
                                     params.overlap_weight * overlap_frac;

                if (overlap == 0) {
                    if (!have_free || score > best_free_score + kTieEpsilon) {
                        have_free = true;
                        best_free = r;
                        best_free_score = score;
                    }
                } else if (overlap_frac < best_any_overlap ||
                           (overlap_frac == best_any_overlap && score > best_any_score + kTieEpsilon)) {
                    best_any = r;
                    best_any_overlap = overlap_frac;
                    best_any_score = score;
                }
            }
        }

        Placement p{asset.id, have_free ? best_free : best_any, have_free ? best_free_score : best_any_score, !have_free};
        proposal.total_score += p.score;
        obstacles.push_back(p.bbox);
        proposal.placements.push_back(std::move(p));
    }
    return proposal;
}

}  // namespace contrastkit
