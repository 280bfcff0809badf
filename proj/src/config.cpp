#include "contrastkit/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "contrastkit/error.hpp"

namespace contrastkit {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError("config " + where + ": " + what);
}

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) fail(where.empty() ? "/" : where, "expected an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) fail(where + "/" + it.key(), "unknown key");
}

double num(const json& obj, const char* key, const std::string& where, double fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_number()) fail(where + "/" + key, "expected a number");
    return it->get<double>();
}

int integer(const json& obj, const char* key, const std::string& where, int fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_number_integer()) fail(where + "/" + key, "expected an integer");
    return it->get<int>();
}

}  // namespace

void PipelineConfig::validate(bool require_strength_source) const {
    if (variations < 1) fail("/variations", "must be at least 1");
    if (patches.n < 1) fail("/patches/n", "must be at least 1");
    if (patches.b < 2) fail("/patches/b", "must be at least 2");
    const auto& w = injection;
    if (w.luminance < 0 || w.color < 0 || w.texture < 0 || w.texture > 1 || w.noise < 0)
        fail("/injection", "weights must be non-negative and texture at most 1");
    if (w.noise_octaves < 1 || w.noise_octaves > 16) fail("/injection/noise_octaves", "must lie in [1, 16]");
    if (w.hsv.hue_deg < 0 || w.hsv.sat < 0 || w.hsv.val < 0) fail("/injection", "tolerances must be non-negative");
    if (layout.stride < 0) fail("/layout/stride", "must be non-negative");
    if (strength_model && fixed_strength) fail("/", "give strength_model or strength, not both");
    if (require_strength_source && !strength_model && !fixed_strength) fail("/", "one of strength_model or strength is required");
    if (strength_model && !fs::exists(*strength_model))
        fail("/strength_model", "file not found: " + strength_model->string());
    if (fixed_strength && !(*fixed_strength >= 0.0 && *fixed_strength <= 1.0)) fail("/strength", "must lie in [0, 1]");
    if (backend != "mock" && backend.rfind("http://", 0) != 0) fail("/backend", "expected \"mock\" or an http:// URL");
}

PipelineConfig parse_config(std::string_view json_text, const fs::path& base_dir) {
    const json doc = json::parse(json_text, nullptr, false);
    if (doc.is_discarded()) fail("/", "not valid JSON");
    only_keys(doc, "", {"paradigm", "variations", "calibration", "patches", "injection", "layout", "strength_model",
                        "strength", "backend", "seed"});
    PipelineConfig cfg;
    if (doc.contains("paradigm")) {
        if (!doc["paradigm"].is_string()) fail("/paradigm", "expected a string");
        cfg.paradigm = parse_paradigm(doc["paradigm"].get<std::string>());
    }
    cfg.variations = integer(doc, "variations", "", cfg.variations);
    if (auto it = doc.find("calibration"); it != doc.end()) {
        only_keys(*it, "/calibration", {"min", "max"});
        try {
            cfg.calibration = CalibrationParams(num(*it, "min", "/calibration", 0.2), num(*it, "max", "/calibration", 0.8));
        } catch (const ValidationError& e) {
            fail("/calibration", e.what());
        }
    }
    if (auto it = doc.find("patches"); it != doc.end()) {
        only_keys(*it, "/patches", {"n", "b"});
        cfg.patches.n = integer(*it, "n", "/patches", cfg.patches.n);
        cfg.patches.b = integer(*it, "b", "/patches", cfg.patches.b);
    }
    if (auto it = doc.find("injection"); it != doc.end()) {
        only_keys(*it, "/injection",
                  {"luminance", "color", "texture", "noise", "noise_octaves", "hue_tolerance_deg", "sat_tolerance",
                   "val_tolerance"});
        auto& w = cfg.injection;
        w.luminance = num(*it, "luminance", "/injection", w.luminance);
        w.color = num(*it, "color", "/injection", w.color);
        w.texture = num(*it, "texture", "/injection", w.texture);
        w.noise = num(*it, "noise", "/injection", w.noise);
        w.noise_octaves = integer(*it, "noise_octaves", "/injection", w.noise_octaves);
        w.hsv.hue_deg = num(*it, "hue_tolerance_deg", "/injection", w.hsv.hue_deg);
        w.hsv.sat = num(*it, "sat_tolerance", "/injection", w.hsv.sat);
        w.hsv.val = num(*it, "val_tolerance", "/injection", w.hsv.val);
    }
    if (auto it = doc.find("layout"); it != doc.end()) {
        only_keys(*it, "/layout", {"dispersion_weight", "overlap_weight", "stride"});
        cfg.layout.dispersion_weight = num(*it, "dispersion_weight", "/layout", cfg.layout.dispersion_weight);
        cfg.layout.overlap_weight = num(*it, "overlap_weight", "/layout", cfg.layout.overlap_weight);
        cfg.layout.stride = integer(*it, "stride", "/layout", cfg.layout.stride);
    }
    if (auto it = doc.find("strength_model"); it != doc.end()) {
        if (!it->is_string()) fail("/strength_model", "expected a path");
        cfg.strength_model = base_dir / it->get<std::string>();
    }
    if (doc.contains("strength")) cfg.fixed_strength = num(doc, "strength", "", 0.0);
    if (auto it = doc.find("backend"); it != doc.end()) {
        if (!it->is_string()) fail("/backend", "expected a string");
        cfg.backend = it->get<std::string>();
    }
    if (auto it = doc.find("seed"); it != doc.end()) {
        if (!it->is_number_unsigned()) fail("/seed", "expected a non-negative integer");
        cfg.seed = it->get<std::uint64_t>();
    }
    cfg.validate();
    return cfg;
}

PipelineConfig load_config(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

void apply_backend_env(PipelineConfig& cfg) {
    const char* url = std::getenv("NC_BACKEND_URL");
    if (url && *url) cfg.backend = url;
}

}  // namespace contrastkit
