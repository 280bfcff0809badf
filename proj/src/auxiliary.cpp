#include "contrastkit/auxiliary.hpp"

#include <algorithm>

#include "contrastkit/error.hpp"
#include "contrastkit/noise.hpp"
#include "contrastkit/rng.hpp"

namespace contrastkit {

InjectionResult inject_asset(const ImageBuffer& img, const DesignAsset& asset, const ImageBuffer& mining_source,
                             std::span<const ColorRGB> asset_colors, const CalibrationParams& cal,
                             const InjectionWeights& weights, const PatchParams& patch_params, std::uint64_t seed,
                             const std::optional<PatchSet>& patches) {
    const int w = img.width();
    const int h = img.height();
    if (!asset.bbox.inside(w, h)) throw ValidationError("asset '" + asset.id + "' lies outside the canvas");

    InjectionResult res{img, gaussian_mask(asset.bbox, w, h), {}};
    InjectionProvenance& prov = res.provenance;
    prov.asset_id = asset.id;
    prov.seed = seed;

    const Mask region = asset_region(asset, w, h);
    if (region_size(region) == 0) return res;

    if (weights.luminance > 0.0) {
        prov.delta_l = weights.luminance * luminance_delta(asset.color, region_mean_color(res.image, region), cal);
        res.image = apply_luminance(res.image, region, prov.delta_l);
    }

    prov.opposite = opposite_color(asset.color);
    if (weights.color > 0.0) {
        prov.neighborhood_fraction = hsv_neighborhood_fraction(res.image, region, prov.opposite, weights.hsv);
        prov.color_weight = std::min(1.0, weights.color * color_injection_weight(prov.neighborhood_fraction, cal));
        std::vector<SegmentedObject> objects;
        if (!asset.segments.empty()) {
            for (const auto& seg : asset.segments) objects.push_back(from_external(seg, region));
        } else {
            objects = segment_region(res.image, region);
        }
        prov.selected_objects = static_cast<int>(select_objects(objects).size());
        res.image = apply_color_injection(res.image, region, objects, prov.opposite, prov.color_weight);
    }

    const Rect& box = asset.bbox;
    if (weights.texture > 0.0) {
        std::optional<PatchSet> mined = patches;
        if (!mined) {
            try {
                mined = mine_patches(mining_source, asset_colors, patch_params.n, patch_params.b, split_seed(seed, 0));
            } catch (const ValidationError& e) {
                prov.texture_skip_reason = e.what();
            }
        }
        if (mined) {
            prov.texture_weight = weights.texture;
            prov.patch_count = mined->patches.size();
            const ImageBuffer texture = quilt_texture(*mined, box.w, box.h, split_seed(seed, 1));
            for (int y = box.y; y < box.bottom(); ++y)
                for (int x = box.x; x < box.right(); ++x) {
                    if (region.at(x, y) <= 0.5f) continue;
                    const float m = static_cast<float>(weights.texture) * res.edit_mask.at(x, y);
                    for (int c = 0; c < 3; ++c) {
                        float& p = res.image.at(x, y, c);
                        p = std::clamp(p + m * (texture.at(x - box.x, y - box.y, c) - p), 0.0f, 1.0f);
                    }
                }
        }
    }

    if (weights.noise > 0.0) {
        prov.noise_amplitude = weights.noise;
        const ImageBuffer noise = fractal_noise(box.w, box.h, weights.noise_octaves, split_seed(seed, 2));
        for (int y = box.y; y < box.bottom(); ++y)
            for (int x = box.x; x < box.right(); ++x) {
                if (region.at(x, y) <= 0.5f) continue;
                const float d = static_cast<float>(weights.noise) * res.edit_mask.at(x, y) *
                                (2.0f * noise.at(x - box.x, y - box.y) - 1.0f);
                for (int c = 0; c < 3; ++c) {
                    float& p = res.image.at(x, y, c);
                    p = std::clamp(p + d, 0.0f, 1.0f);
                }
            }
    }
    return res;
}

AuxiliaryBundle compose_auxiliary(const ImageBuffer& img, const DesignTemplate& tmpl, const DesignAsset& target,
                                  const CalibrationParams& cal, const InjectionWeights& weights,
                                  const PatchParams& patch_params, std::uint64_t seed, Prompt cleaned_prompt,
                                  double strength) {
    if (!(strength >= 0.0 && strength <= 1.0)) throw ValidationError("strength must lie in [0, 1]");
    std::vector<ColorRGB> colors;
    for (const auto& a : tmpl.assets) colors.push_back(a.color);
    if (colors.empty()) colors.push_back(target.color);
    const ImageBuffer& source = tmpl.background ? *tmpl.background : img;
    InjectionResult r = inject_asset(img, target, source, colors, cal, weights, patch_params, seed);
    AuxiliaryBundle bundle{std::move(r.image), std::move(r.edit_mask), std::move(cleaned_prompt), strength, {}};
    bundle.provenance.push_back(std::move(r.provenance));
    return bundle;
}

}  // namespace contrastkit
