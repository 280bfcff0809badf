#include "contrastkit/patches.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "contrastkit/error.hpp"
#include "contrastkit/rng.hpp"

namespace contrastkit {

PatchStats patch_stats(const ImageBuffer& patch) {
    PatchStats s;
    const double n = static_cast<double>(patch.pixel_count());
    double mean[3] = {0, 0, 0};
    for (int y = 0; y < patch.height(); ++y)
        for (int x = 0; x < patch.width(); ++x)
            for (int c = 0; c < 3; ++c) mean[c] += patch.at(x, y, c);
    for (double& m : mean) m /= n;
    double var[3] = {0, 0, 0};
    for (int y = 0; y < patch.height(); ++y)
        for (int x = 0; x < patch.width(); ++x)
            for (int c = 0; c < 3; ++c) {
                const double d = patch.at(x, y, c) - mean[c];
                var[c] += d * d;
            }
    s.mean = {mean[0], mean[1], mean[2]};
    for (int c = 0; c < 3; ++c) s.std[c] = std::sqrt(var[c] / n);
    return s;
}

PatchSet mine_patches(const ImageBuffer& img, std::span<const ColorRGB> asset_colors, int n, int b,
                      std::uint64_t seed, const PatchCriteria& criteria) {
    if (b <= 0 || n <= 0) throw ValidationError("patch mining needs positive n and block size");
    if (img.width() < b || img.height() < b) throw ValidationError("image smaller than the patch size");
    if (img.channels() != 3) throw ValidationError("patch mining expects an RGB image");

    PatchSet set;
    set.block_size = b;
    SplitMix64 rng(seed);
    std::set<std::pair<int, int>> tried;
    const long attempts = static_cast<long>(criteria.attempts_per_patch) * n;
    const auto span_x = static_cast<std::uint64_t>(img.width() - b + 1);
    const auto span_y = static_cast<std::uint64_t>(img.height() - b + 1);

    for (long a = 0; a < attempts && static_cast<int>(set.patches.size()) < n; ++a) {
        const int x = static_cast<int>(rng.below(span_x));
        const int y = static_cast<int>(rng.below(span_y));
        if (!tried.emplace(x, y).second) continue;
        ImageBuffer patch = crop(img, {x, y, b, b});
        const PatchStats st = patch_stats(patch);
        if (st.std[0] < criteria.min_std || st.std[1] < criteria.min_std || st.std[2] < criteria.min_std) continue;
        const bool contrasts = std::all_of(asset_colors.begin(), asset_colors.end(), [&](const ColorRGB& c) {
            return contrast_ratio(st.mean, c) >= criteria.min_contrast;
        });
        if (!contrasts) continue;
        set.patches.push_back(std::move(patch));
        set.source_positions.push_back({x, y});
    }
    if (set.patches.empty()) throw ValidationError("no diffusion-friendly patches");
    return set;
}

PatchSet mine_patches(const ImageBuffer& img, std::span<const DesignAsset> assets, int n, int b, std::uint64_t seed,
                      const PatchCriteria& criteria) {
    std::vector<ColorRGB> colors;
    colors.reserve(assets.size());
    for (const auto& a : assets) colors.push_back(a.color);
    return mine_patches(img, colors, n, b, seed, criteria);
}

std::vector<int> min_error_path(std::span<const double> cost, int rows, int cols, double* total) {
    std::vector<double> acc(cost.begin(), cost.end());
    std::vector<int> from(static_cast<std::size_t>(rows) * cols, 0);
    for (int i = 1; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            int best = j;
            double best_v = acc[static_cast<std::size_t>((i - 1) * cols + j)];
            for (int dj : {-1, 1}) {
                const int k = j + dj;
                if (k < 0 || k >= cols) continue;
                const double v = acc[static_cast<std::size_t>((i - 1) * cols + k)];
                if (v < best_v) {
                    best_v = v;
                    best = k;
                }
            }
            acc[static_cast<std::size_t>(i * cols + j)] += best_v;
            from[static_cast<std::size_t>(i * cols + j)] = best;
        }
    std::vector<int> path(static_cast<std::size_t>(rows));
    int j = 0;
    for (int k = 1; k < cols; ++k)
        if (acc[static_cast<std::size_t>((rows - 1) * cols + k)] < acc[static_cast<std::size_t>((rows - 1) * cols + j)]) j = k;
    if (total) *total = acc[static_cast<std::size_t>((rows - 1) * cols + j)];
    for (int i = rows - 1; i >= 0; --i) {
        path[static_cast<std::size_t>(i)] = j;
        j = from[static_cast<std::size_t>(i * cols + j)];
    }
    return path;
}

namespace {

double pixel_error(const ImageBuffer& canvas, int cx, int cy, const ImageBuffer& patch, int px, int py) {
    double e = 0.0;
    for (int c = 0; c < 3; ++c) {
        const double d = static_cast<double>(canvas.at(cx, cy, c)) - patch.at(px, py, c);
        e += d * d;
    }
    return e;
}

double overlap_error(const ImageBuffer& canvas, const ImageBuffer& patch, int x0, int y0, int b, int o, bool left,
                     bool top) {
    double e = 0.0;
    for (int i = 0; i < b; ++i)
        for (int j = 0; j < b; ++j) {
            const bool in_left = left && j < o;
            const bool in_top = top && i < o;
            if (in_left || in_top) e += pixel_error(canvas, x0 + j, y0 + i, patch, j, i);
        }
    return e;
}

QuiltResult tile_periodic(const PatchSet& set, int out_w, int out_h) {
    const int b = set.block_size;
    QuiltResult r;
    r.image = ImageBuffer(out_w, out_h, 3);
    r.provenance.resize(static_cast<std::size_t>(out_w) * out_h);
    for (int y = 0; y < out_h; y += b)
        for (int x = 0; x < out_w; x += b) {
            QuiltTile t;
            t.x = x;
            t.y = y;
            r.tiles.push_back(std::move(t));
        }
    for (int y = 0; y < out_h; ++y)
        for (int x = 0; x < out_w; ++x) {
            for (int c = 0; c < 3; ++c) r.image.at(x, y, c) = set.patches[0].at(x % b, y % b, c);
            r.provenance[static_cast<std::size_t>(y) * out_w + x] = {0, x % b, y % b};
        }
    return r;
}

}  // namespace

QuiltResult quilt_texture_traced(const PatchSet& set, int out_w, int out_h, std::uint64_t seed) {
    if (set.patches.empty()) throw ValidationError("quilting needs at least one patch");
    if (out_w <= 0 || out_h <= 0) throw ValidationError("quilt size must be positive");
    const int b = set.block_size;
    for (const auto& p : set.patches)
        if (p.width() != b || p.height() != b || p.channels() != 3) throw ValidationError("patch size mismatch");
    if (set.patches.size() == 1) return tile_periodic(set, out_w, out_h);

    const int o = quilt_overlap(b);
    const int step = b - o;
    const int tiles_x = std::max(1, (std::max(out_w - o, 1) + step - 1) / step);
    const int tiles_y = std::max(1, (std::max(out_h - o, 1) + step - 1) / step);
    const int work_w = (tiles_x - 1) * step + b;
    const int work_h = (tiles_y - 1) * step + b;

    ImageBuffer canvas(work_w, work_h, 3);
    std::vector<PixelSource> source(static_cast<std::size_t>(work_w) * work_h);
    SplitMix64 rng(seed);
    QuiltResult result;
    result.overlap = o;

    for (int ty = 0; ty < tiles_y; ++ty)
        for (int tx = 0; tx < tiles_x; ++tx) {
            QuiltTile tile;
            tile.x = tx * step;
            tile.y = ty * step;
            tile.has_left = tx > 0 && o > 0;
            tile.has_top = ty > 0 && o > 0;

            if (!tile.has_left && !tile.has_top) {
                tile.patch = static_cast<int>(rng.below(set.patches.size()));
            } else {
                std::vector<double> errors(set.patches.size());
                double best = std::numeric_limits<double>::infinity();
                for (std::size_t k = 0; k < set.patches.size(); ++k) {
                    errors[k] = overlap_error(canvas, set.patches[k], tile.x, tile.y, b, o, tile.has_left, tile.has_top);
                    best = std::min(best, errors[k]);
                }
                std::vector<int> near;
                for (std::size_t k = 0; k < errors.size(); ++k)
                    if (errors[k] <= best * 1.1) near.push_back(static_cast<int>(k));
                tile.patch = near[rng.below(near.size())];
            }
            const ImageBuffer& patch = set.patches[static_cast<std::size_t>(tile.patch)];

            if (tile.has_left) {
                tile.vertical_error.resize(static_cast<std::size_t>(b) * o);
                for (int i = 0; i < b; ++i)
                    for (int j = 0; j < o; ++j)
                        tile.vertical_error[static_cast<std::size_t>(i * o + j)] =
                            pixel_error(canvas, tile.x + j, tile.y + i, patch, j, i);
                tile.vertical_cut = min_error_path(tile.vertical_error, b, o, &tile.vertical_cost);
            }
            if (tile.has_top) {
                // Transposed so the same top-to-bottom DP walks left to right.
                std::vector<double> transposed(static_cast<std::size_t>(b) * o);
                tile.horizontal_error.resize(static_cast<std::size_t>(o) * b);
                for (int i = 0; i < o; ++i)
                    for (int j = 0; j < b; ++j) {
                        const double e = pixel_error(canvas, tile.x + j, tile.y + i, patch, j, i);
                        tile.horizontal_error[static_cast<std::size_t>(i * b + j)] = e;
                        transposed[static_cast<std::size_t>(j * o + i)] = e;
                    }
                tile.horizontal_cut = min_error_path(transposed, b, o, &tile.horizontal_cost);
            }

            for (int i = 0; i < b; ++i)
                for (int j = 0; j < b; ++j) {
                    const bool keep_left = tile.has_left && j < tile.vertical_cut[static_cast<std::size_t>(i)];
                    const bool keep_top = tile.has_top && i < tile.horizontal_cut[static_cast<std::size_t>(j)];
                    if (keep_left || keep_top) continue;
                    for (int c = 0; c < 3; ++c) canvas.at(tile.x + j, tile.y + i, c) = patch.at(j, i, c);
                    source[static_cast<std::size_t>(tile.y + i) * work_w + tile.x + j] = {tile.patch, j, i};
                }
            result.tiles.push_back(std::move(tile));
        }

    result.image = crop(canvas, {0, 0, out_w, out_h});
    result.provenance.resize(static_cast<std::size_t>(out_w) * out_h);
    for (int y = 0; y < out_h; ++y)
        for (int x = 0; x < out_w; ++x)
            result.provenance[static_cast<std::size_t>(y) * out_w + x] = source[static_cast<std::size_t>(y) * work_w + x];
    return result;
}

ImageBuffer quilt_texture(const PatchSet& patches, int out_w, int out_h, std::uint64_t seed) {
    return quilt_texture_traced(patches, out_w, out_h, seed).image;
}

}  // namespace contrastkit
