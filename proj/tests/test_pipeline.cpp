#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "contrastkit/error.hpp"
#include "contrastkit/pipeline.hpp"
#include "contrastkit/prompt.hpp"
#include "contrastkit/strength.hpp"
#include "contrastkit/template.hpp"
#include "test_util.hpp"

using namespace contrastkit;
using nlohmann::json;
using testutil::TempDir;
using testutil::write_text;

namespace {

DesignTemplate poster(int w, int h, bool positioned = true, bool with_background = true) {
    DesignTemplate t;
    t.canvas_w = w;
    t.canvas_h = h;
    if (with_background) t.background = testutil::light_background(w, h, 17);
    DesignAsset title;
    title.id = "title";
    title.kind = AssetKind::text;
    title.content = "Summer Sale";
    title.bbox = {w / 8, h / 6, w / 2, h / 8};
    title.positioned = positioned;
    title.color = {1, 1, 1};
    DesignAsset logo;
    logo.id = "logo";
    logo.bbox = {w - w / 4, h - h / 5, w / 6, h / 10};
    logo.positioned = positioned;
    logo.color = {0.95, 0.9, 0.2};
    t.assets = {title, logo};
    t.prompt = "a bright white beach with turquoise water";
    return t;
}

PipelineConfig small_config() {
    PipelineConfig cfg;
    cfg.fixed_strength = 0.5;
    cfg.patches = {200, 16};
    cfg.seed = 42;
    return cfg;
}

StrengthModel mock_model() {
    StrengthTrainingSet set;
    set.backend_id = "mock-diffusion";
    for (int k = 0; k < 10; ++k) {
        set.norms.push_back(10.0 + 2.0 * k);
        set.strengths.push_back(0.9 - 0.07 * k);
    }
    return fit_strength_model(set);
}

json without_timings(const std::string& manifest) {
    json j = json::parse(manifest);
    j.erase("timings_ms");
    return j;
}

class FailingBackend final : public GenerativeBackend {
public:
    BackendIdentity identity() override { return inner.identity(); }
    Prompt caption(const ImageBuffer& img) override { return inner.caption(img); }
    double embed_norm(const Prompt& p) override { return inner.embed_norm(p); }
    ImageBuffer edit(const EditRequest&) override { throw BackendError("edit failed", "ck-test", 3, 503); }
    MockBackend inner;
};

class ForeignBackend final : public GenerativeBackend {
public:
    BackendIdentity identity() override { return {"sd-2.1", 1024}; }
    Prompt caption(const ImageBuffer& img) override { return inner.caption(img); }
    double embed_norm(const Prompt& p) override { return inner.embed_norm(p); }
    ImageBuffer edit(const EditRequest& r) override { return inner.edit(r); }
    MockBackend inner;
};

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("variation plan with a user layout") {
    const DesignTemplate t = poster(128, 96);
    PipelineConfig cfg = small_config();
    const auto plan = generate_variations(t, cfg);
    REQUIRE(plan.size() == 4);
    CHECK(plan[0].layout == LayoutSource::user);
    CHECK(plan[1].layout == LayoutSource::user);
    CHECK(plan[2].layout == LayoutSource::proposed);
    CHECK(plan[3].layout == LayoutSource::proposed);
    CHECK(plan[0].colors == ColorSource::original);
    CHECK(plan[1].colors == ColorSource::palette);
    CHECK(plan[2].colors == ColorSource::original);
    CHECK(plan[3].colors == ColorSource::palette);
    CHECK(plan[0].edit_seed == plan[1].edit_seed);
    CHECK(plan[2].edit_seed == plan[3].edit_seed);
    CHECK(plan[0].edit_seed != plan[2].edit_seed);
    CHECK(plan[1].palette_seed == plan[3].palette_seed);

    cfg.variations = 1;
    const auto one = generate_variations(t, cfg);
    REQUIRE(one.size() == 1);
    CHECK(one[0].layout == LayoutSource::user);
    CHECK(one[0].colors == ColorSource::original);
}

TEST_CASE("variation plan without a user layout") {
    const DesignTemplate t = poster(128, 96, false);
    const auto plan = generate_variations(t, small_config());
    REQUIRE(plan.size() == 4);
    for (const auto& e : plan) CHECK(e.layout == LayoutSource::proposed);
}

TEST_CASE("variation seeds are reproducible in isolation") {
    PipelineConfig cfg = small_config();
    cfg.variations = 6;
    const auto six = generate_variations(poster(64, 64), cfg);
    cfg.variations = 4;
    const auto four = generate_variations(poster(64, 64), cfg);
    for (int k = 0; k < 4; ++k) CHECK(six[k] == four[k]);
}

TEST_CASE("palette and emphasized asset") {
    ImageBuffer img(10, 10, 3, 0.1f);
    for (int x = 0; x < 3; ++x)
        for (int c = 0; c < 3; ++c) img.at(x, 0, c) = 0.9f;
    const auto pal = extract_palette(img, 8);
    REQUIRE(pal.size() == 2);
    CHECK(pal[0].r == doctest::Approx(0.1));
    CHECK(pal[1].r == doctest::Approx(0.9));

    DesignTemplate t = poster(64, 64);
    CHECK(emphasized_asset(t).id == "title");
    t.assets[0].kind = AssetKind::graphic;
    CHECK(emphasized_asset(t).id == "title");  // larger of the two
    t.assets[1].bbox = {0, 0, 60, 60};
    CHECK(emphasized_asset(t).id == "logo");
}

TEST_CASE("end-to-end determinism") {
    const DesignTemplate t = poster(160, 120);
    MockBackend backend;
    const auto a = run_pipeline(t, small_config(), backend);
    const auto b = run_pipeline(t, small_config(), backend);
    REQUIRE(a.variations.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) CHECK(a.variations[k].image == b.variations[k].image);
    CHECK(without_timings(a.manifest) == without_timings(b.manifest));
    // Both members of a group share the edited image.
    CHECK(a.variations[0].image == a.variations[1].image);
    CHECK(a.variations[2].image == a.variations[3].image);
    PipelineConfig other = small_config();
    other.seed = 43;
    CHECK_FALSE(run_pipeline(t, other, backend).variations[0].image == a.variations[0].image);
}

TEST_CASE("DiffEdit keeps pixels outside the mask") {
    const DesignTemplate t = poster(160, 120, false);
    MockBackend backend;
    const auto r = run_pipeline(t, small_config(), backend);
    for (const auto& v : r.variations) {
        long long outside = 0;
        for (int y = 0; y < 120; ++y)
            for (int x = 0; x < 160; ++x) {
                if (v.edit_mask.at(x, y) > 0.0f) continue;
                ++outside;
                for (int c = 0; c < 3; ++c) REQUIRE(v.image.at(x, y, c) == r.background.at(x, y, c));
            }
        CHECK(outside > 0);
    }
}

TEST_CASE("manifest strength matches the model") {
    const DesignTemplate t = poster(128, 96);
    PipelineConfig cfg = small_config();
    cfg.fixed_strength.reset();
    const StrengthModel model = mock_model();
    TempDir dir;
    save_strength_model(dir / "m.json", model);
    cfg.strength_model = dir / "m.json";
    MockBackend backend;
    const auto r = run_pipeline(t, cfg, backend);
    const json m = json::parse(r.manifest);
    const double norm = mock_embed_norm(r.cleaned_prompt.text());
    CHECK(m["embed_norm"].get<double>() == norm);
    CHECK(m["strength"].get<double>() == predict_strength(model, norm));
    CHECK(m["strength_source"] == "model");
    const std::string sub = substitute_color_name({1, 1, 1}, ColorLexicon::css());
    CHECK(m["prompt"]["substitute"] == sub);
    CHECK(m["prompt"]["cleaned"] == "a bright " + sub + " beach with " + sub + " water");
    CHECK(m["status"] == "ok");
    CHECK(m["variations"].size() == 4);
    CHECK(m["variations"][0]["file"] == "variation_1.png");
}

TEST_CASE("prompt cleaning replaces chromatic terms") {
    DesignTemplate t = poster(96, 96);
    t.assets[0].color = {0, 0, 0.5};
    MockBackend backend;
    const auto r = run_pipeline(t, small_config(), backend);
    const std::string sub = nearest_color_name(opposite_color({0, 0, 0.5}), ColorLexicon::css());
    CHECK(r.cleaned_prompt.text() == "a bright " + sub + " beach with " + sub + " water");
}

TEST_CASE("backend identity mismatch") {
    const DesignTemplate t = poster(64, 64);
    ForeignBackend foreign;
    CHECK_THROWS_AS(run_pipeline(t, small_config(), foreign, mock_model()), ConfigError);
}

TEST_CASE("initialization fallbacks") {
    MockBackend backend;
    DesignTemplate t = poster(96, 64);
    t.prompt.reset();
    const auto captioned = run_pipeline(t, small_config(), backend);
    CHECK(captioned.background_source == "template");
    CHECK(captioned.prompt.source() == PromptSource::caption);
    CHECK(captioned.prompt.text().rfind("a background image with dominant color ", 0) == 0);

    DesignTemplate blank = poster(96, 64, true, false);
    blank.prompt.reset();
    const auto white = run_pipeline(blank, small_config(), backend);
    CHECK(white.background_source == "white");
    CHECK(white.background == ImageBuffer(96, 64, 3, 1.0f));
    CHECK(white.prompt.text() == "a background image with dominant color white");

    DesignTemplate keyed = poster(96, 64, true, false);
    keyed.prompt.reset();
    keyed.keywords = {"forest", "autumn"};
    const auto gen = run_pipeline(keyed, small_config(), backend);
    CHECK(gen.background_source == "generated");
    CHECK(gen.prompt.text() == "forest, autumn");
    CHECK(gen.prompt.source() == PromptSource::user);
}

TEST_CASE("contrast rises for a light asset on a light background") {
    const DesignTemplate t = poster(192, 128);
    MockBackend backend;
    const auto r = run_pipeline(t, small_config(), backend);
    const json m = json::parse(r.manifest);
    const auto& title = m["variations"][0]["assets"][0];
    CHECK(title["id"] == "title");
    CHECK(title["contrast_after"].get<double>() > title["contrast_before"].get<double>());
}

TEST_CASE("proposed layouts stay on the canvas and off fixed elements") {
    DesignTemplate t = poster(128, 96, false);
    t.fixed_elements = {{0, 0, 128, 20}};
    MockBackend backend;
    const auto r = run_pipeline(t, small_config(), backend);
    for (const auto& v : r.variations)
        for (const auto& a : v.assets) {
            CHECK(a.bbox.inside(128, 96));
            CHECK(intersection_area(a.bbox, t.fixed_elements[0]) == 0);
        }
}

TEST_CASE("backend failure aborts with a partial manifest") {
    FailingBackend failing;
    try {
        run_pipeline(poster(64, 64), small_config(), failing);
        FAIL("expected an abort");
    } catch (const PipelineAborted& e) {
        const json m = json::parse(e.manifest());
        CHECK(m["status"] == "failed");
        CHECK(m["error"]["request_id"] == "ck-test");
        CHECK(m["error"]["attempts"] == 3);
        CHECK(m.contains("strength"));
        CHECK(e.request_id() == "ck-test");
    }
}

TEST_CASE("outputs on disk") {
    MockBackend backend;
    PipelineConfig cfg = small_config();
    cfg.variations = 2;
    const auto r = run_pipeline(poster(64, 48), cfg, backend);
    TempDir dir;
    write_outputs(r, dir / "out");
    CHECK(load_png(dir / "out/variation_1.png") == quantize8(r.variations[0].image));
    CHECK(std::filesystem::exists(dir / "out/variation_2_composite.png"));
    std::ifstream in(dir / "out/manifest.json");
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(json::parse(ss.str())["variations"].size() == 2);
}

}

namespace {

int run_cli(const std::string& args, const std::filesystem::path& log) {
    const std::string cmd = std::string("\"") + CK_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_sample(const TempDir& dir) {
    save_png(dir / "bg.png", testutil::light_background(96, 64, 3));
    write_text(dir / "template.json", R"({"canvas": {"width": 96, "height": 64}, "background": "bg.png",
        "prompt": "a pale sand texture",
        "assets": [{"id": "title", "kind": "text", "content": "Hi", "bbox": [10, 10, 50, 14], "color": "#ffffff"}]})");
    write_text(dir / "config.json", R"({"strength": 0.4, "patches": {"n": 100, "b": 12}, "seed": 5})");
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("enhance succeeds and writes outputs") {
    TempDir dir;
    write_sample(dir);
    const std::string base = "enhance --template \"" + (dir / "template.json").string() + "\" --config \"" +
                             (dir / "config.json").string() + "\" --backend mock --out \"" +
                             (dir / "out").string() + "\"";
    CHECK(run_cli(base + " --variations 2 --paradigm sdedit", dir / "log") == 0);
    CHECK(std::filesystem::exists(dir / "out/variation_2.png"));
    const json m = json::parse(slurp(dir / "out/manifest.json"));
    CHECK(m["paradigm"] == "sdedit");
    CHECK(m["variations"].size() == 2);
    CHECK(m["seed"] == 5);

    CHECK(run_cli(base + " --seed 9", dir / "log") == 0);
    CHECK(json::parse(slurp(dir / "out/manifest.json"))["seed"] == 9);
}

TEST_CASE("exit codes") {
    TempDir dir;
    write_sample(dir);
    const std::string tmpl = "\"" + (dir / "template.json").string() + "\"";
    const std::string out = "\"" + (dir / "out").string() + "\"";

    write_text(dir / "bad_config.json", R"({"strength": 0.4, "colour": 1})");
    CHECK(run_cli("enhance --template " + tmpl + " --config \"" + (dir / "bad_config.json").string() + "\" --out " + out,
                  dir / "log") == 2);
    CHECK(slurp(dir / "log").find("/colour") != std::string::npos);

    write_text(dir / "bad_template.json", R"({"canvas": {"width": 10, "height": 10},
        "assets": [{"id": "big", "bbox": [5, 5, 10, 10], "color": "#000000"}]})");
    CHECK(run_cli("enhance --template \"" + (dir / "bad_template.json").string() + "\" --config \"" +
                      (dir / "config.json").string() + "\" --out " + out,
                  dir / "log") == 4);
    CHECK(slurp(dir / "log").find("'big'") != std::string::npos);

    CHECK(run_cli("enhance --template " + tmpl + " --config \"" + (dir / "config.json").string() +
                      "\" --backend http://127.0.0.1:9 --out " + out,
                  dir / "log") == 3);
    CHECK(json::parse(slurp(dir / "out/manifest.json"))["status"] == "failed");

    CHECK(run_cli("enhance --template " + tmpl, dir / "log") == 2);
    CHECK(run_cli("frobnicate", dir / "log") == 2);
}

TEST_CASE("environment variable overrides the backend flag") {
    TempDir dir;
    write_sample(dir);
    const std::string cmd = "enhance --template \"" + (dir / "template.json").string() + "\" --config \"" +
                            (dir / "config.json").string() + "\" --backend mock --out \"" + (dir / "out").string() +
                            "\"";
    ::setenv("NC_BACKEND_URL", "http://127.0.0.1:9", 1);
    const int rc = run_cli(cmd, dir / "log");
    ::unsetenv("NC_BACKEND_URL");
    CHECK(rc == 3);
}

TEST_CASE("metrics, fit-strength and propose-layout") {
    TempDir dir;
    write_sample(dir);
    const std::string bg = "\"" + (dir / "bg.png").string() + "\"";
    CHECK(run_cli("metrics --original " + bg + " --edited " + bg + " --template \"" +
                      (dir / "template.json").string() + "\"",
                  dir / "log") == 0);
    const json mj = json::parse(slurp(dir / "log"));
    CHECK(mj[0]["asset_id"] == "title");
    CHECK(mj[0]["psnr_db"] == 100.0);
    CHECK(mj[0]["sam_radians"] == 0.0);

    write_text(dir / "train.json", R"({"backend_id": "mock-diffusion", "norms": [10, 12, 14, 16, 18, 20],
        "strengths": [0.9, 0.8, 0.7, 0.6, 0.5, 0.4]})");
    CHECK(run_cli("fit-strength --data \"" + (dir / "train.json").string() + "\" --out \"" +
                      (dir / "model.json").string() + "\"",
                  dir / "log") == 0);
    const StrengthModel m = load_strength_model(dir / "model.json");
    CHECK(m.backend_id == "mock-diffusion");
    CHECK(std::abs(predict_strength(m, 14.0) - 0.7) <= 0.06);

    write_text(dir / "loose.json", R"({"canvas": {"width": 96, "height": 64}, "background": "bg.png",
        "assets": [{"id": "badge", "size": [20, 10], "color": "#000000"}]})");
    CHECK(run_cli("propose-layout --template \"" + (dir / "loose.json").string() + "\"", dir / "log") == 0);
    const json lj = json::parse(slurp(dir / "log"));
    REQUIRE(lj["placements"].size() == 1);
    CHECK(lj["placements"][0]["asset_id"] == "badge");
    CHECK(lj["placements"][0]["bbox"][2] == 20);
}

}
