#include "contrastkit/template.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "contrastkit/error.hpp"

namespace contrastkit {

using nlohmann::json;
namespace fs = std::filesystem;

bool DesignTemplate::has_user_layout() const noexcept {
    if (assets.empty()) return false;
    for (const auto& a : assets)
        if (!a.positioned) return false;
    return true;
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ValidationError(where + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(where + "/" + key, "required field missing");
    return *it;
}

int get_int(const json& v, const std::string& where) {
    if (!v.is_number_integer()) fail(where, "expected an integer");
    return v.get<int>();
}

std::string get_string(const json& v, const std::string& where) {
    if (!v.is_string()) fail(where, "expected a string");
    return v.get<std::string>();
}

Rect get_rect(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 4) fail(where, "expected [x, y, w, h]");
    Rect r{get_int(v[0], where + "/0"), get_int(v[1], where + "/1"), get_int(v[2], where + "/2"),
           get_int(v[3], where + "/3")};
    if (r.w <= 0 || r.h <= 0) fail(where, "width and height must be positive");
    return r;
}

ImageBuffer load_image(const fs::path& base, const json& v, const std::string& where, int channels, int w, int h) {
    const fs::path p = base / get_string(v, where);
    if (!fs::exists(p)) fail(where, "image file not found: " + p.string());
    ImageBuffer img;
    try {
        img = load_png(p, channels);
    } catch (const Error& e) {
        fail(where, e.what());
    }
    if (img.width() != w || img.height() != h)
        fail(where, "image is " + std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                        ", canvas is " + std::to_string(w) + "x" + std::to_string(h));
    return img;
}

ExternalSegment load_segment(const fs::path& base, const json& v, const std::string& where, int w, int h) {
    ExternalSegment seg;
    seg.mask = load_image(base, v, where, 1, w, h);
    fs::path sidecar = base / get_string(v, where);
    sidecar.replace_extension(".json");
    std::ifstream in(sidecar);
    if (!in) fail(where, "segmentation sidecar not found: " + sidecar.string());
    json side = json::parse(in, nullptr, false);
    if (side.is_discarded() || !side.is_object() || !side.contains("confidence") || !side["confidence"].is_number())
        fail(where, "sidecar " + sidecar.string() + " must hold {\"confidence\": number}");
    seg.confidence = side["confidence"].get<double>();
    if (!(seg.confidence >= 0.0 && seg.confidence <= 1.0)) fail(where, "confidence must lie in [0, 1]");
    return seg;
}

}  // namespace

void validate_template(const DesignTemplate& t) {
    if (t.canvas_w <= 0 || t.canvas_h <= 0) fail("/canvas", "dimensions must be positive");
    if (t.background && (t.background->width() != t.canvas_w || t.background->height() != t.canvas_h ||
                         t.background->channels() != 3))
        fail("/background", "background must be an RGB image matching the canvas");
    std::set<std::string> ids;
    for (std::size_t i = 0; i < t.assets.size(); ++i) {
        const auto& a = t.assets[i];
        const std::string where = "/assets/" + std::to_string(i);
        if (a.id.empty()) fail(where + "/id", "must be non-empty");
        if (!ids.insert(a.id).second) fail(where + "/id", "duplicate asset id '" + a.id + "'");
        if (a.bbox.w <= 0 || a.bbox.h <= 0) fail(where, "asset '" + a.id + "' has a non-positive size");
        if (a.bbox.w > t.canvas_w || a.bbox.h > t.canvas_h)
            fail(where, "asset '" + a.id + "' is larger than the canvas");
        if (a.positioned && !a.bbox.inside(t.canvas_w, t.canvas_h))
            fail(where + "/bbox", "asset '" + a.id + "' lies outside the canvas");
        if (a.kind == AssetKind::text && (!a.content || a.content->empty()))
            fail(where + "/content", "text asset '" + a.id + "' requires content");
        if (!a.color.valid()) fail(where + "/color", "asset '" + a.id + "' color out of range");
    }
    for (std::size_t i = 0; i < t.fixed_elements.size(); ++i)
        if (!t.fixed_elements[i].inside(t.canvas_w, t.canvas_h))
            fail("/fixed_elements/" + std::to_string(i), "fixed element lies outside the canvas");
}

std::optional<std::string> template_prompt(const DesignTemplate& t) {
    if (t.prompt) return t.prompt;
    if (t.keywords.empty()) return std::nullopt;
    std::string out;
    for (const auto& k : t.keywords) {
        if (!out.empty()) out += ", ";
        out += k;
    }
    return out;
}

DesignTemplate parse_template(std::string_view json_text, const fs::path& base_dir) {
    const json doc = json::parse(json_text, nullptr, false);
    if (doc.is_discarded()) fail("", "template is not valid JSON");
    if (!doc.is_object()) fail("", "template must be a JSON object");

    DesignTemplate t;
    const json& canvas = require(doc, "canvas", "");
    if (!canvas.is_object()) fail("/canvas", "expected an object");
    t.canvas_w = get_int(require(canvas, "width", "/canvas"), "/canvas/width");
    t.canvas_h = get_int(require(canvas, "height", "/canvas"), "/canvas/height");
    if (t.canvas_w <= 0 || t.canvas_h <= 0) fail("/canvas", "dimensions must be positive");

    if (auto it = doc.find("background"); it != doc.end() && !it->is_null())
        t.background = load_image(base_dir, *it, "/background", 3, t.canvas_w, t.canvas_h);
    if (auto it = doc.find("prompt"); it != doc.end() && !it->is_null()) {
        t.prompt = get_string(*it, "/prompt");
        if (t.prompt->find_first_not_of(" \t\r\n") == std::string::npos) fail("/prompt", "must not be blank");
    }
    if (auto it = doc.find("keywords"); it != doc.end()) {
        if (!it->is_array()) fail("/keywords", "expected an array");
        for (std::size_t i = 0; i < it->size(); ++i)
            t.keywords.push_back(get_string((*it)[i], "/keywords/" + std::to_string(i)));
    }

    const json& assets = require(doc, "assets", "");
    if (!assets.is_array()) fail("/assets", "expected an array");
    for (std::size_t i = 0; i < assets.size(); ++i) {
        const std::string where = "/assets/" + std::to_string(i);
        const json& a = assets[i];
        if (!a.is_object()) fail(where, "expected an object");
        DesignAsset asset;
        asset.id = get_string(require(a, "id", where), where + "/id");
        const std::string kind = a.contains("kind") ? get_string(a["kind"], where + "/kind") : "graphic";
        if (kind == "text")
            asset.kind = AssetKind::text;
        else if (kind != "graphic")
            fail(where + "/kind", "expected \"text\" or \"graphic\"");
        if (a.contains("bbox")) {
            asset.bbox = get_rect(a["bbox"], where + "/bbox");
        } else if (a.contains("size")) {
            const json& s = a["size"];
            if (!s.is_array() || s.size() != 2) fail(where + "/size", "expected [w, h]");
            asset.bbox = {0, 0, get_int(s[0], where + "/size/0"), get_int(s[1], where + "/size/1")};
            asset.positioned = false;
        } else {
            fail(where, "asset '" + asset.id + "' needs either bbox or size");
        }
        try {
            asset.color = parse_hex_color(get_string(require(a, "color", where), where + "/color"));
        } catch (const ValidationError& e) {
            fail(where + "/color", e.what());
        }
        if (a.contains("content")) asset.content = get_string(a["content"], where + "/content");
        if (a.contains("raster_mask"))
            asset.raster_mask = load_image(base_dir, a["raster_mask"], where + "/raster_mask", 1, t.canvas_w, t.canvas_h);
        if (a.contains("segments")) {
            const json& segs = a["segments"];
            if (!segs.is_array()) fail(where + "/segments", "expected an array of mask paths");
            for (std::size_t k = 0; k < segs.size(); ++k)
                asset.segments.push_back(load_segment(base_dir, segs[k], where + "/segments/" + std::to_string(k),
                                                      t.canvas_w, t.canvas_h));
        }
        t.assets.push_back(std::move(asset));
    }
    if (auto it = doc.find("fixed_elements"); it != doc.end()) {
        if (!it->is_array()) fail("/fixed_elements", "expected an array");
        for (std::size_t i = 0; i < it->size(); ++i)
            t.fixed_elements.push_back(get_rect((*it)[i], "/fixed_elements/" + std::to_string(i)));
    }
    validate_template(t);
    return t;
}

DesignTemplate load_template(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open template: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_template(ss.str(), path.parent_path());
}

}  // namespace contrastkit
