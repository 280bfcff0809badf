#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "contrastkit/design.hpp"
#include "contrastkit/injection.hpp"
#include "contrastkit/patches.hpp"
#include "contrastkit/prompt.hpp"

namespace contrastkit {

// Scales for the four contrast sources. Zero disables a source.
struct InjectionWeights {
    double luminance = 1.0;
    double color = 1.0;
    double texture = 0.35;
    double noise = 0.15;
    int noise_octaves = 5;
    HsvTolerance hsv;
};

struct PatchParams {
    int n = 1000;
    int b = 25;
};

struct InjectionProvenance {
    std::string asset_id;
    double delta_l = 0.0;
    ColorRGB opposite;
    double neighborhood_fraction = 0.0;
    double color_weight = 0.0;
    int selected_objects = 0;
    double texture_weight = 0.0;
    std::size_t patch_count = 0;
    // Empty unless texture injection was skipped.
    std::string texture_skip_reason;
    double noise_amplitude = 0.0;
    std::uint64_t seed = 0;
};

struct AuxiliaryBundle {
    ImageBuffer aux_image;
    Mask edit_mask;
    Prompt cleaned_prompt;
    double strength = 0.0;
    std::vector<InjectionProvenance> provenance;
};

// Result of running every contrast source for one asset.
struct InjectionResult {
    ImageBuffer image;
    Mask edit_mask;
    InjectionProvenance provenance;
};

// Luminance, color, quilted texture, then fractal noise, all confined to the
// asset region. Texture patches come from `patches` when given, otherwise
// they are mined from `mining_source` against `asset_colors`; a mining
// failure is recorded in the provenance and the texture step skipped.
InjectionResult inject_asset(const ImageBuffer& img, const DesignAsset& asset, const ImageBuffer& mining_source,
                             std::span<const ColorRGB> asset_colors, const CalibrationParams& cal,
                             const InjectionWeights& weights, const PatchParams& patch_params, std::uint64_t seed,
                             const std::optional<PatchSet>& patches = std::nullopt);

// Phase-one composition for `target` over `img`, packaged with the prompt and
// strength that phase two will use.
AuxiliaryBundle compose_auxiliary(const ImageBuffer& img, const DesignTemplate& tmpl, const DesignAsset& target,
                                  const CalibrationParams& cal, const InjectionWeights& weights,
                                  const PatchParams& patch_params, std::uint64_t seed, Prompt cleaned_prompt,
                                  double strength);

}  // namespace contrastkit
