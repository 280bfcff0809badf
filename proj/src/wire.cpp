#include "contrastkit/wire.hpp"

#include <openssl/evp.h>

#include <cmath>

#include <json.hpp>

#include "contrastkit/error.hpp"

namespace contrastkit::wire {

using nlohmann::json;

namespace {

json parse_body(std::string_view body) {
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw BackendError("malformed wire body: not a JSON object");
    return j;
}

template <class T>
T field(const json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end()) throw BackendError(std::string("wire body lacks field '") + name + "'");
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw BackendError(std::string("wire field '") + name + "' has the wrong type");
    }
}

}  // namespace

std::string base64_encode(std::span<const std::uint8_t> bytes) {
    std::string out(4 * ((bytes.size() + 2) / 3), '\0');
    const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                  static_cast<int>(bytes.size()));
    out.resize(static_cast<std::size_t>(n));
    return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
    if (text.size() % 4 != 0) throw BackendError("invalid base64 length");
    std::vector<std::uint8_t> out(text.size() / 4 * 3);
    const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                                  static_cast<int>(text.size()));
    if (n < 0) throw BackendError("invalid base64 payload");
    // EVP_DecodeBlock keeps the bytes that padding stands for.
    std::size_t len = static_cast<std::size_t>(n);
    if (!text.empty() && text.back() == '=') --len;
    if (text.size() >= 2 && text[text.size() - 2] == '=') --len;
    out.resize(len);
    return out;
}

std::string encode_image(const ImageBuffer& img) { return base64_encode(encode_png(img)); }

ImageBuffer decode_image(std::string_view b64, int channels) {
    const auto bytes = base64_decode(b64);
    try {
        return decode_png(bytes, channels);
    } catch (const Error& e) {
        throw BackendError(std::string("undecodable image on the wire: ") + e.what());
    }
}

std::string encode_caption_request(const ImageBuffer& img) { return json{{"image", encode_image(img)}}.dump(); }

ImageBuffer decode_caption_request(std::string_view body) {
    return decode_image(field<std::string>(parse_body(body), "image"), 3);
}

std::string encode_caption_response(const Prompt& p) { return json{{"prompt", p.text()}}.dump(); }

Prompt decode_caption_response(std::string_view body) {
    auto text = field<std::string>(parse_body(body), "prompt");
    try {
        return Prompt(std::move(text), PromptSource::caption);
    } catch (const ValidationError&) {
        throw BackendError("backend returned a blank caption");
    }
}

std::string encode_embed_request(const Prompt& p) { return json{{"prompt", p.text()}}.dump(); }

Prompt decode_embed_request(std::string_view body) { return Prompt(field<std::string>(parse_body(body), "prompt")); }

std::string encode_embed_response(double norm) { return json{{"norm", norm}}.dump(); }

double decode_embed_response(std::string_view body) {
    const double v = field<double>(parse_body(body), "norm");
    if (!(v > 0.0) || !std::isfinite(v)) throw BackendError("embedding norm must be a positive finite number");
    return v;
}

std::string encode_edit_request(const EditRequest& req) {
    json j{{"image", encode_image(req.image)},
           {"prompt", req.prompt},
           {"strength", req.strength},
           {"seed", req.seed},
           {"paradigm", std::string(to_string(req.paradigm))}};
    if (req.mask) j["mask"] = encode_image(*req.mask);
    return j.dump();
}

EditRequest decode_edit_request(std::string_view body) {
    const json j = parse_body(body);
    EditRequest req;
    req.image = decode_image(field<std::string>(j, "image"), 3);
    if (auto it = j.find("mask"); it != j.end() && !it->is_null()) req.mask = decode_image(field<std::string>(j, "mask"), 1);
    req.prompt = field<std::string>(j, "prompt");
    req.strength = field<double>(j, "strength");
    req.seed = field<std::uint64_t>(j, "seed");
    req.paradigm = parse_paradigm(field<std::string>(j, "paradigm"));
    return req;
}

std::string encode_edit_response(const ImageBuffer& img) { return json{{"image", encode_image(img)}}.dump(); }

ImageBuffer decode_edit_response(std::string_view body) {
    return decode_image(field<std::string>(parse_body(body), "image"), 3);
}

std::string encode_identity(const BackendIdentity& id) {
    return json{{"id", id.id}, {"embed_dim", id.embed_dim}}.dump();
}

BackendIdentity decode_identity(std::string_view body) {
    const json j = parse_body(body);
    BackendIdentity id{field<std::string>(j, "id"), field<int>(j, "embed_dim")};
    if (id.id.empty()) throw BackendError("backend reported an empty identity");
    return id;
}

std::string encode_error(const ErrorBody& e) { return json{{"code", e.code}, {"message", e.message}}.dump(); }

ErrorBody decode_error(std::string_view body) {
    json j = json::parse(body, nullptr, false);
    ErrorBody e;
    if (j.is_object()) {
        if (auto it = j.find("code"); it != j.end() && it->is_string()) e.code = it->get<std::string>();
        if (auto it = j.find("message"); it != j.end() && it->is_string()) e.message = it->get<std::string>();
    } else {
        e.message = std::string(body);
    }
    return e;
}

}  // namespace contrastkit::wire
