#include "contrastkit/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <future>
#include <map>

#include <json.hpp>

#include "contrastkit/layout.hpp"
#include "contrastkit/metrics.hpp"
#include "contrastkit/patches.hpp"
#include "contrastkit/rng.hpp"
#include "contrastkit/saliency.hpp"
#include "contrastkit/template.hpp"

namespace contrastkit {

using nlohmann::json;

namespace {

// Stream indices for split_seed(cfg.seed, .).
constexpr std::uint64_t kBackgroundStream = 1u << 20;
constexpr std::uint64_t kMiningStream = (1u << 20) + 1;
constexpr std::uint64_t kPaletteStream = 1u << 21;
constexpr std::uint64_t kInjectionStream = 1u << 22;

double elapsed_ms(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

json rect_json(const Rect& r) { return json::array({r.x, r.y, r.w, r.h}); }

json provenance_json(const InjectionProvenance& p) {
    json j{{"asset_id", p.asset_id},
           {"delta_l", p.delta_l},
           {"opposite_color", to_hex(p.opposite)},
           {"neighborhood_fraction", p.neighborhood_fraction},
           {"color_weight", p.color_weight},
           {"selected_objects", p.selected_objects},
           {"texture_weight", p.texture_weight},
           {"patch_count", p.patch_count},
           {"noise_amplitude", p.noise_amplitude},
           {"seed", p.seed}};
    if (!p.texture_skip_reason.empty()) j["texture_skipped"] = p.texture_skip_reason;
    return j;
}

ImageBuffer paint_assets(const ImageBuffer& img, const std::vector<DesignAsset>& assets) {
    ImageBuffer out = img;
    for (const auto& a : assets) {
        if (!a.raster_mask) continue;
        const Mask& m = *a.raster_mask;
        const double col[3] = {a.color.r, a.color.g, a.color.b};
        for (int y = 0; y < img.height(); ++y)
            for (int x = 0; x < img.width(); ++x) {
                const float alpha = m.at(x, y);
                if (alpha <= 0.0f) continue;
                for (int c = 0; c < 3; ++c) {
                    float& p = out.at(x, y, c);
                    p = p + alpha * (static_cast<float>(col[c]) - p);
                }
            }
    }
    return out;
}

// Raster masks are canvas-sized and drawn at the user position; moving an
// asset moves its mask with it.
std::optional<Mask> shift_mask(const std::optional<Mask>& m, int dx, int dy) {
    if (!m || (dx == 0 && dy == 0)) return m;
    Mask out(m->width(), m->height(), 1);
    for (int y = 0; y < m->height(); ++y)
        for (int x = 0; x < m->width(); ++x) {
            const int sx = x - dx;
            const int sy = y - dy;
            if (sx >= 0 && sy >= 0 && sx < m->width() && sy < m->height()) out.at(x, y) = m->at(sx, sy);
        }
    return out;
}

struct GroupOutput {
    ImageBuffer edited;
    Mask edit_mask;
    std::vector<DesignAsset> assets;
    std::vector<InjectionProvenance> provenance;
    double ms = 0.0;
};

}  // namespace

std::string_view to_string(LayoutSource s) noexcept { return s == LayoutSource::user ? "user" : "proposed"; }
std::string_view to_string(ColorSource s) noexcept { return s == ColorSource::original ? "original" : "palette"; }

std::vector<VariationPlanEntry> generate_variations(const DesignTemplate& t, const PipelineConfig& cfg) {
    std::vector<VariationPlanEntry> plan;
    const bool user = t.has_user_layout();
    for (int k = 0; k < cfg.variations; ++k) {
        VariationPlanEntry e;
        e.index = k;
        e.group = k / 2;
        e.layout = (user && e.group == 0) ? LayoutSource::user : LayoutSource::proposed;
        e.colors = k % 2 == 0 ? ColorSource::original : ColorSource::palette;
        e.edit_seed = split_seed(cfg.seed, static_cast<std::uint64_t>(e.group));
        // Groups 0 and 1 draw the same palette colors; later pairs of groups
        // get fresh draws.
        e.palette_seed = split_seed(cfg.seed, kPaletteStream + static_cast<std::uint64_t>(e.group / 2));
        plan.push_back(e);
    }
    return plan;
}

std::vector<ColorRGB> extract_palette(const ImageBuffer& img, std::size_t max_colors) {
    struct Bin {
        long long count = 0;
        double sum[3] = {0, 0, 0};
    };
    std::map<int, Bin> bins;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            int key = 0;
            for (int c = 0; c < 3; ++c)
                key = key * 16 + std::clamp(static_cast<int>(img.at(x, y, c) * 16.0f), 0, 15);
            Bin& b = bins[key];
            ++b.count;
            for (int c = 0; c < 3; ++c) b.sum[c] += img.at(x, y, c);
        }
    std::vector<std::pair<int, Bin>> sorted(bins.begin(), bins.end());
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.second.count > b.second.count; });
    std::vector<ColorRGB> out;
    for (const auto& [key, b] : sorted) {
        if (out.size() == max_colors) break;
        const double n = static_cast<double>(b.count);
        out.push_back({b.sum[0] / n, b.sum[1] / n, b.sum[2] / n});
    }
    return out;
}

const DesignAsset& emphasized_asset(const DesignTemplate& t) {
    if (t.assets.empty()) throw ValidationError("template has no assets");
    for (const auto& a : t.assets)
        if (a.kind == AssetKind::text) return a;
    const DesignAsset* best = &t.assets.front();
    for (const auto& a : t.assets)
        if (a.bbox.area() > best->bbox.area()) best = &a;
    return *best;
}

PipelineResult run_pipeline(const DesignTemplate& t, const PipelineConfig& cfg, GenerativeBackend& backend,
                            const std::optional<StrengthModel>& model_override) {
    validate_template(t);
    cfg.validate(!model_override);
    if (t.assets.empty()) throw ValidationError("template has no assets to emphasize");
    const auto started = std::chrono::steady_clock::now();
    json manifest;
    json timings = json::object();
    manifest["status"] = "running";

    std::optional<StrengthModel> model = model_override;
    if (!model && cfg.strength_model) model = load_strength_model(*cfg.strength_model);
    if (!model && !cfg.fixed_strength) throw ConfigError("no strength model or fixed strength configured");

    PipelineResult r;
    auto fail = [&](const BackendError& e) -> PipelineAborted {
        manifest["status"] = "failed";
        manifest["error"] = {{"message", e.what()},
                             {"request_id", e.request_id()},
                             {"attempts", e.attempts()},
                             {"last_status", e.last_status()}};
        manifest["timings_ms"] = timings;
        return PipelineAborted(e, manifest.dump(2));
    };

    try {
        auto t0 = std::chrono::steady_clock::now();
        const BackendIdentity identity = backend.identity();
        manifest["backend"] = {{"id", identity.id}, {"embed_dim", identity.embed_dim}};
        if (model && model->backend_id != identity.id)
            throw ConfigError("strength model was fitted for backend '" + model->backend_id + "' but the backend is '" +
                              identity.id + "'");
        manifest["paradigm"] = std::string(to_string(cfg.paradigm));
        manifest["seed"] = cfg.seed;

        // Initialization.
        const std::optional<std::string> given_prompt = template_prompt(t);
        if (t.background) {
            r.background = *t.background;
            r.background_source = "template";
        } else if (given_prompt) {
            EditRequest gen;
            gen.image = ImageBuffer(t.canvas_w, t.canvas_h, 3, 1.0f);
            gen.prompt = *given_prompt;
            gen.strength = 1.0;
            gen.seed = split_seed(cfg.seed, kBackgroundStream);
            gen.paradigm = EditParadigm::sdedit;
            r.background = backend.edit(gen);
            r.background_source = "generated";
        } else {
            r.background = ImageBuffer(t.canvas_w, t.canvas_h, 3, 1.0f);
            r.background_source = "white";
        }
        r.prompt = given_prompt ? Prompt(*given_prompt, PromptSource::user) : backend.caption(r.background);
        timings["initialization"] = elapsed_ms(t0);

        // Prompt cleaning.
        t0 = std::chrono::steady_clock::now();
        const DesignAsset& focus = emphasized_asset(t);
        const std::string substitute = substitute_color_name(focus.color, ColorLexicon::css());
        r.cleaned_prompt = replace_color_terms(r.prompt, substitute, ColorLexicon::css());
        manifest["background_source"] = r.background_source;
        manifest["prompt"] = {{"original", r.prompt.text()},
                              {"source", std::string(to_string(r.prompt.source()))},
                              {"cleaned", r.cleaned_prompt.text()},
                              {"emphasized_asset", focus.id},
                              {"substitute", substitute}};
        timings["prompt_cleaning"] = elapsed_ms(t0);

        // Strength.
        t0 = std::chrono::steady_clock::now();
        if (model) {
            r.embed_norm = backend.embed_norm(r.cleaned_prompt);
            r.strength = predict_strength(*model, r.embed_norm);
            manifest["embed_norm"] = r.embed_norm;
            manifest["strength_source"] = "model";
        } else {
            r.strength = *cfg.fixed_strength;
            manifest["strength_source"] = "fixed";
        }
        manifest["strength"] = r.strength;
        timings["strength"] = elapsed_ms(t0);

        const auto plan = generate_variations(t, cfg);
        const int groups = plan.empty() ? 0 : plan.back().group + 1;

        // Layout, only when some group needs it.
        t0 = std::chrono::steady_clock::now();
        std::optional<LayoutProposal> proposal;
        if (std::any_of(plan.begin(), plan.end(), [](const auto& e) { return e.layout == LayoutSource::proposed; })) {
            const SaliencyMap sal = apply_center_bias(compute_saliency(r.background));
            proposal = propose_layout(sal, t.assets, t.fixed_elements, cfg.layout);
            json places = json::array();
            for (const auto& p : proposal->placements)
                places.push_back({{"asset_id", p.asset_id}, {"bbox", rect_json(p.bbox)}, {"score", p.score},
                                  {"degraded", p.degraded}});
            manifest["layout"] = {{"placements", places}, {"total_score", proposal->total_score}};
        }
        timings["layout"] = elapsed_ms(t0);

        // Patches are mined once from the background against the original
        // asset colors and shared by every group.
        t0 = std::chrono::steady_clock::now();
        std::vector<ColorRGB> colors;
        for (const auto& a : t.assets) colors.push_back(a.color);
        std::optional<PatchSet> patches;
        std::string mining_skip;
        if (cfg.injection.texture > 0.0) {
            try {
                patches = mine_patches(r.background, colors, cfg.patches.n, cfg.patches.b,
                                       split_seed(cfg.seed, kMiningStream));
            } catch (const ValidationError& e) {
                mining_skip = e.what();
            }
        }
        timings["patch_mining"] = elapsed_ms(t0);

        auto group_assets = [&](LayoutSource src) {
            std::vector<DesignAsset> placed = t.assets;
            if (src == LayoutSource::proposed) {
                for (auto& a : placed) {
                    auto it = std::find_if(proposal->placements.begin(), proposal->placements.end(),
                                           [&](const Placement& p) { return p.asset_id == a.id; });
                    const Rect old = a.bbox;
                    a.bbox = it->bbox;
                    a.positioned = true;
                    const int dx = a.bbox.x - old.x;
                    const int dy = a.bbox.y - old.y;
                    a.raster_mask = shift_mask(a.raster_mask, dx, dy);
                    for (auto& seg : a.segments) seg.mask = *shift_mask(seg.mask, dx, dy);
                }
            }
            return placed;
        };

        auto run_group = [&](const VariationPlanEntry& head) {
            const auto g0 = std::chrono::steady_clock::now();
            GroupOutput out;
            out.assets = group_assets(head.layout);
            ImageBuffer aux = r.background;
            out.edit_mask = Mask(t.canvas_w, t.canvas_h, 1);
            InjectionWeights weights = cfg.injection;
            if (!patches) weights.texture = 0.0;
            for (std::size_t i = 0; i < out.assets.size(); ++i) {
                const std::uint64_t seed = split_seed(head.edit_seed, kInjectionStream + i);
                InjectionResult inj =
                    inject_asset(aux, out.assets[i], r.background, colors, cfg.calibration, weights, cfg.patches, seed,
                                 patches);
                if (!patches && cfg.injection.texture > 0.0) inj.provenance.texture_skip_reason = mining_skip;
                aux = std::move(inj.image);
                auto um = out.edit_mask.data();
                auto am = inj.edit_mask.data();
                for (std::size_t k = 0; k < um.size(); ++k) um[k] = std::max(um[k], am[k]);
                out.provenance.push_back(std::move(inj.provenance));
            }
            EditRequest req;
            req.image = std::move(aux);
            req.prompt = r.cleaned_prompt.text();
            req.strength = r.strength;
            req.seed = head.edit_seed;
            req.paradigm = cfg.paradigm;
            if (cfg.paradigm == EditParadigm::diffedit) req.mask = out.edit_mask;
            out.edited = backend.edit(req);
            out.ms = elapsed_ms(g0);
            return out;
        };

        // Groups are independent; run them concurrently and assemble in
        // plan order.
        t0 = std::chrono::steady_clock::now();
        std::vector<std::future<GroupOutput>> futures;
        for (int g = 0; g < groups; ++g) {
            const auto head = *std::find_if(plan.begin(), plan.end(), [&](const auto& e) { return e.group == g; });
            futures.push_back(std::async(std::launch::async, run_group, head));
        }
        std::vector<GroupOutput> outputs;
        std::optional<BackendError> first_backend_error;
        for (auto& f : futures) {
            try {
                outputs.push_back(f.get());
            } catch (const BackendError& e) {
                if (!first_backend_error) first_backend_error = e;
                outputs.emplace_back();
            }
        }
        if (first_backend_error) throw *first_backend_error;
        timings["variations"] = elapsed_ms(t0);

        const std::vector<ColorRGB> palette = extract_palette(t.background ? *t.background : r.background);
        json vars = json::array();
        for (const auto& e : plan) {
            const GroupOutput& go = outputs[static_cast<std::size_t>(e.group)];
            VariationResult v;
            v.plan = e;
            v.image = go.edited;
            v.assets = go.assets;
            v.edit_mask = go.edit_mask;
            if (e.colors == ColorSource::palette && !palette.empty()) {
                SplitMix64 rng(e.palette_seed);
                for (auto& a : v.assets) a.color = palette[rng.below(palette.size())].clamped();
            }
            v.composite = paint_assets(v.image, v.assets);
            json assets = json::array();
            for (std::size_t i = 0; i < v.assets.size(); ++i) {
                const auto& a = v.assets[i];
                assets.push_back({{"id", a.id},
                                  {"bbox", rect_json(a.bbox)},
                                  {"color", to_hex(a.color)},
                                  {"contrast_before", asset_contrast(r.background, a)},
                                  {"contrast_after", asset_contrast(v.image, a)}});
            }
            json injections = json::array();
            for (const auto& p : go.provenance) injections.push_back(provenance_json(p));
            vars.push_back({{"index", e.index},
                            {"file", "variation_" + std::to_string(e.index + 1) + ".png"},
                            {"layout", std::string(to_string(e.layout))},
                            {"colors", std::string(to_string(e.colors))},
                            {"group", e.group},
                            {"edit_seed", e.edit_seed},
                            {"palette_seed", e.palette_seed},
                            {"assets", assets},
                            {"injections", injections}});
            r.variations.push_back(std::move(v));
        }
        json pal = json::array();
        for (const auto& c : palette) pal.push_back(to_hex(c));
        manifest["palette"] = pal;
        manifest["variations"] = vars;
        manifest["status"] = "ok";
        timings["total"] = elapsed_ms(started);
        manifest["timings_ms"] = timings;
        r.manifest = manifest.dump(2);
        return r;
    } catch (const PipelineAborted&) {
        throw;
    } catch (const BackendError& e) {
        throw fail(e);
    }
}

void write_outputs(const PipelineResult& r, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    for (const auto& v : r.variations) {
        const std::string stem = "variation_" + std::to_string(v.plan.index + 1);
        save_png(out_dir / (stem + ".png"), v.image);
        save_png(out_dir / (stem + "_composite.png"), v.composite);
    }
    std::ofstream(out_dir / "manifest.json") << r.manifest << '\n';
}

}  // namespace contrastkit
