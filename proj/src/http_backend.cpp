#include <httplib.h>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <thread>

#include "contrastkit/backend.hpp"
#include "contrastkit/error.hpp"
#include "contrastkit/rng.hpp"
#include "contrastkit/wire.hpp"

namespace contrastkit {

namespace {

std::string next_request_id() {
    static std::atomic<std::uint64_t> counter{0};
    static const std::uint64_t salt =
        mix64(static_cast<std::uint64_t>(std::chrono::steady_clock::now().time_since_epoch().count()));
    char buf[40];
    std::snprintf(buf, sizeof buf, "ck-%016llx", static_cast<unsigned long long>(hash_combine(salt, counter++)));
    return buf;
}

}  // namespace

HttpBackend::HttpBackend(std::string base_url, HttpOptions options)
    : base_url_(std::move(base_url)), options_(options) {
    while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
    if (base_url_.rfind("http://", 0) != 0) throw ConfigError("backend URL must start with http://: " + base_url_);
    if (options_.attempts < 1) throw ConfigError("backend attempts must be at least 1");
}

std::string HttpBackend::call(const std::string& method, const std::string& path, const std::string& body) {
    const std::string request_id = next_request_id();
    // A client per call keeps concurrent requests independent.
    httplib::Client client(base_url_);
    client.set_connection_timeout(options_.timeout);
    client.set_read_timeout(options_.timeout);
    client.set_write_timeout(options_.timeout);
    const httplib::Headers headers{{"X-Request-Id", request_id}};

    int last_status = 0;
    std::string last_problem;
    auto backoff = options_.initial_backoff;
    for (int attempt = 1; attempt <= options_.attempts; ++attempt) {
        auto res = method == "GET" ? client.Get(path, headers) : client.Post(path, headers, body, "application/json");
        if (!res) {
            last_status = 0;
            last_problem = "transport error: " + httplib::to_string(res.error());
        } else if (res->status >= 200 && res->status < 300) {
            return res->body;
        } else {
            last_status = res->status;
            const auto err = wire::decode_error(res->body);
            last_problem = "HTTP " + std::to_string(res->status);
            if (!err.code.empty()) last_problem += " " + err.code;
            if (!err.message.empty()) last_problem += ": " + err.message;
            if (res->status < 500) throw BackendError(method + " " + path + " failed with " + last_problem, request_id, attempt, last_status);
        }
        if (attempt < options_.attempts) {
            std::this_thread::sleep_for(backoff);
            backoff *= 2;
        }
    }
    throw BackendError(method + " " + path + " failed after " + std::to_string(options_.attempts) +
                           " attempts: " + last_problem,
                       request_id, options_.attempts, last_status);
}

BackendIdentity HttpBackend::identity() { return wire::decode_identity(call("GET", "/v1/identity", {})); }

Prompt HttpBackend::caption(const ImageBuffer& img) {
    if (img.empty() || img.channels() != 3) throw ValidationError("caption needs a non-empty RGB image");
    return wire::decode_caption_response(call("POST", "/v1/caption", wire::encode_caption_request(img)));
}

double HttpBackend::embed_norm(const Prompt& p) {
    return wire::decode_embed_response(call("POST", "/v1/embed", wire::encode_embed_request(p)));
}

ImageBuffer HttpBackend::edit(const EditRequest& req) {
    req.validate();
    ImageBuffer out = wire::decode_edit_response(call("POST", "/v1/edit", wire::encode_edit_request(req)));
    if (out.width() != req.image.width() || out.height() != req.image.height())
        throw BackendError("backend edit changed the image size");
    return out;
}

}  // namespace contrastkit
