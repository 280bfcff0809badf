#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "contrastkit/auxiliary.hpp"
#include "contrastkit/backend.hpp"
#include "contrastkit/config.hpp"
#include "contrastkit/design.hpp"
#include "contrastkit/error.hpp"
#include "contrastkit/strength.hpp"

namespace contrastkit {

enum class LayoutSource { user, proposed };
enum class ColorSource { original, palette };

std::string_view to_string(LayoutSource s) noexcept;
std::string_view to_string(ColorSource s) noexcept;

struct VariationPlanEntry {
    int index = 0;
    LayoutSource layout = LayoutSource::proposed;
    ColorSource colors = ColorSource::original;
    // Entries in the same group share one auxiliary image and one edit.
    int group = 0;
    std::uint64_t edit_seed = 0;
    std::uint64_t palette_seed = 0;

    friend bool operator==(const VariationPlanEntry&, const VariationPlanEntry&) = default;
};

// Entries come in pairs (original colors, palette colors). The first pair
// keeps the user layout when the template has one; all later pairs use the
// proposed layout. Every seed is a function of (cfg.seed, position) only.
std::vector<VariationPlanEntry> generate_variations(const DesignTemplate& t, const PipelineConfig& cfg);

// Up to 8 most frequent colors of `img` after quantizing each channel to 16
// levels, most frequent first; each color is the mean of its bin.
std::vector<ColorRGB> extract_palette(const ImageBuffer& img, std::size_t max_colors = 8);

// The asset whose color steers prompt cleaning: first text asset, else the
// largest (ties by template order).
const DesignAsset& emphasized_asset(const DesignTemplate& t);

struct VariationResult {
    VariationPlanEntry plan;
    ImageBuffer image;
    // `image` with raster-masked assets painted in their variation colors.
    ImageBuffer composite;
    // Assets as placed and colored in this variation.
    std::vector<DesignAsset> assets;
    Mask edit_mask;
};

struct PipelineResult {
    ImageBuffer background;
    std::string background_source;
    Prompt prompt{"-"};
    Prompt cleaned_prompt{"-"};
    double embed_norm = 0.0;
    double strength = 0.0;
    std::vector<VariationResult> variations;
    std::string manifest;  // JSON
};

// Backend failure after retries, carrying the manifest written so far.
class PipelineAborted : public BackendError {
public:
    PipelineAborted(const BackendError& cause, std::string partial_manifest)
        : BackendError(cause), manifest_(std::move(partial_manifest)) {}
    const std::string& manifest() const noexcept { return manifest_; }

private:
    std::string manifest_;
};

// `model` overrides cfg.strength_model; one of them or cfg.fixed_strength
// must be available.
PipelineResult run_pipeline(const DesignTemplate& t, const PipelineConfig& cfg, GenerativeBackend& backend,
                            const std::optional<StrengthModel>& model = std::nullopt);

// Writes variation_<k>.png, variation_<k>_composite.png and manifest.json.
void write_outputs(const PipelineResult& r, const std::filesystem::path& out_dir);

}  // namespace contrastkit
