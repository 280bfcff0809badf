#pragma once

#include <span>
#include <string>
#include <vector>

#include "contrastkit/design.hpp"
#include "contrastkit/saliency.hpp"

namespace contrastkit {

struct Placement {
    std::string asset_id;
    Rect bbox;
    double score = 0.0;
    // Set when no overlap-free candidate existed.
    bool degraded = false;
};

struct LayoutProposal {
    std::vector<Placement> placements;
    double total_score = 0.0;
};

struct LayoutParams {
    double dispersion_weight = 0.25;
    double overlap_weight = 10.0;
    // 0 selects max(1, min(W, H) / 32).
    int stride = 0;
};

int layout_stride(int canvas_w, int canvas_h) noexcept;

// Offsets 0, stride, 2*stride, ... up to extent - size, plus extent - size
// itself when the stride skips it.
std::vector<int> candidate_offsets(int extent, int size, int stride);

// Greedy placement in descending-area order (ties by id). Each asset takes
// the scan-order-first candidate maximizing
//   mean(1 - H over bbox) + w_disp * d_min / diagonal - w_ov * overlap_fraction
// among overlap-free candidates, where d_min is the center distance to the
// nearest already placed asset (0 for the first) and overlap_fraction counts
// fixed elements and earlier placements. Falls back to the least-overlapping
// candidate, flagged degraded. Only asset sizes are read.
LayoutProposal propose_layout(const SaliencyMap& saliency, std::span<const DesignAsset> assets,
                              std::span<const Rect> fixed, const LayoutParams& params = {});

}  // namespace contrastkit
