#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "contrastkit/color.hpp"
#include "contrastkit/design.hpp"
#include "contrastkit/image.hpp"

namespace contrastkit {

struct PatchPosition {
    int x = 0;
    int y = 0;
    friend bool operator==(const PatchPosition&, const PatchPosition&) = default;
};

// Square RGB blocks cut from a background.
struct PatchSet {
    std::vector<ImageBuffer> patches;
    int block_size = 0;
    std::vector<PatchPosition> source_positions;
};

struct PatchCriteria {
    double min_contrast = 4.5;
    double min_std = 0.05;
    int attempts_per_patch = 50;
};

// Statistics the acceptance gates look at.
struct PatchStats {
    ColorRGB mean;
    double std[3] = {0, 0, 0};
};
PatchStats patch_stats(const ImageBuffer& patch);

// Samples up to `n` distinct b x b blocks at seeded random positions (at most
// attempts_per_patch * n draws). A block qualifies when its mean color has
// WCAG contrast >= min_contrast against every asset color and every channel's
// standard deviation is >= min_std. Throws ValidationError("no
// diffusion-friendly patches") when nothing qualifies.
PatchSet mine_patches(const ImageBuffer& img, std::span<const ColorRGB> asset_colors, int n, int b,
                      std::uint64_t seed, const PatchCriteria& criteria = {});
PatchSet mine_patches(const ImageBuffer& img, std::span<const DesignAsset> assets, int n, int b, std::uint64_t seed,
                      const PatchCriteria& criteria = {});

// One placed block of the quilt. Overlap error surfaces are row-major:
// vertical is b rows x overlap cols, horizontal is overlap rows x b cols.
struct QuiltTile {
    int x = 0;
    int y = 0;
    int patch = 0;
    bool has_left = false;
    bool has_top = false;
    std::vector<double> vertical_error;
    std::vector<double> horizontal_error;
    // For row i the first new column in the left overlap (vertical cut) and
    // for column j the first new row in the top overlap (horizontal cut).
    std::vector<int> vertical_cut;
    std::vector<int> horizontal_cut;
    double vertical_cost = 0.0;
    double horizontal_cost = 0.0;
};

struct PixelSource {
    int patch = -1;
    int x = 0;
    int y = 0;
};

struct QuiltResult {
    ImageBuffer image;
    int overlap = 0;
    std::vector<QuiltTile> tiles;
    // Row-major over `image`: which patch pixel each output pixel copies.
    std::vector<PixelSource> provenance;
};

inline int quilt_overlap(int block_size) noexcept {
    return static_cast<int>((block_size + 3) / 6);  // round(b / 6)
}

// Image quilting: blocks on a (b - overlap) grid, each chosen among the
// patches whose overlap SSD is within 10% of the best, joined along the
// minimum-error boundary cut. A single-patch set tiles periodically.
QuiltResult quilt_texture_traced(const PatchSet& patches, int out_w, int out_h, std::uint64_t seed);
ImageBuffer quilt_texture(const PatchSet& patches, int out_w, int out_h, std::uint64_t seed);

// Minimum-cost top-to-bottom path through a rows x cols cost surface with
// moves to the same or an adjacent column. Returns one column per row.
std::vector<int> min_error_path(std::span<const double> cost, int rows, int cols, double* total = nullptr);

}  // namespace contrastkit
