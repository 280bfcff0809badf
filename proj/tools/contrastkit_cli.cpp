#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "contrastkit/config.hpp"
#include "contrastkit/error.hpp"
#include "contrastkit/layout.hpp"
#include "contrastkit/metrics.hpp"
#include "contrastkit/pipeline.hpp"
#include "contrastkit/saliency.hpp"
#include "contrastkit/strength.hpp"
#include "contrastkit/template.hpp"

namespace ck = contrastkit;
using nlohmann::json;

namespace {

int exit_code(ck::ErrorKind k) {
    switch (k) {
        case ck::ErrorKind::config: return 2;
        case ck::ErrorKind::backend: return 3;
        case ck::ErrorKind::validation: return 4;
    }
    return 1;
}

struct EnhanceArgs {
    std::string template_path;
    std::string config_path;
    std::string backend;
    std::string out_dir;
    std::string paradigm;
    int variations = 0;
    std::optional<std::uint64_t> seed;
};

int run_enhance(const EnhanceArgs& a) {
    ck::PipelineConfig cfg = ck::load_config(a.config_path);
    if (!a.backend.empty()) cfg.backend = a.backend;
    ck::apply_backend_env(cfg);
    if (!a.paradigm.empty()) cfg.paradigm = ck::parse_paradigm(a.paradigm);
    if (a.variations != 0) cfg.variations = a.variations;
    if (a.seed) cfg.seed = *a.seed;
    cfg.validate();

    const ck::DesignTemplate t = ck::load_template(a.template_path);
    auto backend = ck::make_backend(cfg.backend);
    try {
        const ck::PipelineResult r = ck::run_pipeline(t, cfg, *backend);
        ck::write_outputs(r, a.out_dir);
        std::printf("wrote %zu variations to %s (strength %.4f)\n", r.variations.size(), a.out_dir.c_str(), r.strength);
    } catch (const ck::PipelineAborted& e) {
        std::filesystem::create_directories(a.out_dir);
        std::ofstream(std::filesystem::path(a.out_dir) / "manifest.json") << e.manifest() << '\n';
        throw;
    }
    return 0;
}

int run_metrics(const std::string& original, const std::string& edited, const std::string& template_path) {
    const ck::DesignTemplate t = ck::load_template(template_path);
    const ck::ImageBuffer a = ck::load_png(original);
    const ck::ImageBuffer b = ck::load_png(edited);
    json out = json::array();
    for (const auto& asset : t.assets) {
        if (!asset.positioned) continue;
        const auto m = ck::compute_metrics(a, b, asset);
        out.push_back({{"asset_id", asset.id},
                       {"psnr_db", m.psnr_db},
                       {"ssim", m.ssim},
                       {"sam_radians", m.sam_radians},
                       {"contrast_before", m.contrast_before},
                       {"contrast_after", m.contrast_after}});
    }
    if (out.empty()) {
        out.push_back({{"psnr_db", ck::psnr(a, b)}, {"ssim", ck::ssim(a, b)}, {"sam_radians", ck::spectral_angle(a, b)}});
    }
    std::cout << out.dump(2) << '\n';
    return 0;
}

int run_fit(const std::string& data, const std::string& out, const ck::SvrHyperParams& hyper) {
    const ck::StrengthTrainingSet set = ck::load_training_set(data);
    const ck::StrengthModel m = ck::fit_strength_model(set, hyper);
    ck::save_strength_model(out, m);
    std::printf("fitted %zu support vectors for backend '%s' (gamma %.6g, bias %.6g)\n", m.support_norms.size(),
                m.backend_id.c_str(), m.gamma, m.bias);
    return 0;
}

int run_layout(const std::string& template_path, const std::string& saliency_path) {
    const ck::DesignTemplate t = ck::load_template(template_path);
    ck::SaliencyMap sal = ck::SaliencyMap::zeros(t.canvas_w, t.canvas_h);
    if (!saliency_path.empty()) {
        sal = ck::load_saliency_png(saliency_path);
    } else {
        const ck::ImageBuffer bg = t.background ? *t.background : ck::ImageBuffer(t.canvas_w, t.canvas_h, 3, 1.0f);
        sal = ck::apply_center_bias(ck::compute_saliency(bg));
    }
    if (sal.width() != t.canvas_w || sal.height() != t.canvas_h)
        throw ck::ValidationError("saliency map size does not match the canvas");
    const ck::LayoutProposal p = ck::propose_layout(sal, t.assets, t.fixed_elements);
    json places = json::array();
    for (const auto& pl : p.placements)
        places.push_back({{"asset_id", pl.asset_id},
                          {"bbox", {pl.bbox.x, pl.bbox.y, pl.bbox.w, pl.bbox.h}},
                          {"score", pl.score},
                          {"degraded", pl.degraded}});
    std::cout << json{{"placements", places}, {"total_score", p.total_score}}.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"contrastkit: contrast-aware design enhancement"};
    app.require_subcommand(1);

    EnhanceArgs ea;
    auto* enhance = app.add_subcommand("enhance", "Run the pipeline and write variations plus a manifest");
    enhance->add_option("--template", ea.template_path, "Template JSON")->required();
    enhance->add_option("--config", ea.config_path, "Pipeline config JSON")->required()->check(CLI::ExistingFile);
    enhance->add_option("--backend", ea.backend, "mock or http://host:port (NC_BACKEND_URL takes precedence)");
    enhance->add_option("--out", ea.out_dir, "Output directory")->required();
    enhance->add_option("--paradigm", ea.paradigm, "sdedit or diffedit")->check(CLI::IsMember({"sdedit", "diffedit"}));
    enhance->add_option("--variations", ea.variations, "Number of variations")->check(CLI::PositiveNumber);
    enhance->add_option("--seed", ea.seed, "Seed");

    std::string original, edited, metrics_template;
    auto* metrics = app.add_subcommand("metrics", "PSNR, SSIM, SAM and asset contrast of an edit");
    metrics->add_option("--original", original)->required()->check(CLI::ExistingFile);
    metrics->add_option("--edited", edited)->required()->check(CLI::ExistingFile);
    metrics->add_option("--template", metrics_template)->required();

    std::string data, model_out;
    ck::SvrHyperParams hyper;
    double gamma = 0.0;
    auto* fit = app.add_subcommand("fit-strength", "Fit the strength regressor from (norm, strength) samples");
    fit->add_option("--data", data)->required()->check(CLI::ExistingFile);
    fit->add_option("--out", model_out)->required();
    fit->add_option("--c", hyper.c_reg, "Regularization")->check(CLI::PositiveNumber);
    fit->add_option("--epsilon", hyper.epsilon_tube, "Tube half-width")->check(CLI::NonNegativeNumber);
    auto* gamma_opt = fit->add_option("--gamma", gamma, "RBF gamma (default from data spread)")->check(CLI::PositiveNumber);

    std::string layout_template, saliency;
    auto* layout = app.add_subcommand("propose-layout", "Place assets on low-saliency regions");
    layout->add_option("--template", layout_template)->required();
    layout->add_option("--saliency", saliency, "8-bit grayscale saliency PNG")->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*enhance) return run_enhance(ea);
        if (*metrics) return run_metrics(original, edited, metrics_template);
        if (*fit) {
            if (*gamma_opt) hyper.gamma = gamma;
            return run_fit(data, model_out, hyper);
        }
        if (*layout) return run_layout(layout_template, saliency);
    } catch (const ck::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
