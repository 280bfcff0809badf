#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "contrastkit/image.hpp"
#include "contrastkit/prompt.hpp"

namespace contrastkit {

enum class EditParadigm { sdedit, diffedit };

std::string_view to_string(EditParadigm p) noexcept;
EditParadigm parse_paradigm(std::string_view s);

struct BackendIdentity {
    std::string id;
    int embed_dim = 0;

    friend bool operator==(const BackendIdentity&, const BackendIdentity&) = default;
};

struct EditRequest {
    ImageBuffer image;
    // Single-channel, same size as `image`. Required for diffedit, ignored by
    // sdedit.
    std::optional<Mask> mask;
    std::string prompt;
    double strength = 0.0;
    std::uint64_t seed = 0;
    EditParadigm paradigm = EditParadigm::sdedit;

    // Throws ValidationError when the request is malformed.
    void validate() const;

    friend bool operator==(const EditRequest&, const EditRequest&) = default;
};

// Captioning, prompt-embedding norm, and strength-conditioned editing.
// Implementations must accept concurrent calls.
class GenerativeBackend {
public:
    virtual ~GenerativeBackend() = default;

    virtual BackendIdentity identity() = 0;
    virtual Prompt caption(const ImageBuffer& img) = 0;
    virtual double embed_norm(const Prompt& p) = 0;
    virtual ImageBuffer edit(const EditRequest& req) = 0;
};

// Deterministic, stateless stand-in for a diffusion service.
class MockBackend final : public GenerativeBackend {
public:
    static constexpr std::string_view kIdentity = "mock-diffusion";
    static constexpr int kEmbedDim = 768;

    BackendIdentity identity() override;
    Prompt caption(const ImageBuffer& img) override;
    double embed_norm(const Prompt& p) override;
    ImageBuffer edit(const EditRequest& req) override;
};

std::uint64_t fnv1a64(std::string_view text) noexcept;
// 10 + (fnv1a64(text) mod 2000) / 100. Defined for any text, including "".
double mock_embed_norm(std::string_view text) noexcept;
// 5x5 mean filter with edge clamping, applied per channel.
ImageBuffer box_blur5(const ImageBuffer& img);

struct HttpOptions {
    int attempts = 3;
    std::chrono::milliseconds initial_backoff{100};
    std::chrono::seconds timeout{120};
};

// Client for the JSON wire protocol. Retries 5xx and transport failures with
// exponential backoff; 4xx responses fail immediately.
class HttpBackend final : public GenerativeBackend {
public:
    explicit HttpBackend(std::string base_url, HttpOptions options = {});

    BackendIdentity identity() override;
    Prompt caption(const ImageBuffer& img) override;
    double embed_norm(const Prompt& p) override;
    ImageBuffer edit(const EditRequest& req) override;

    const std::string& base_url() const noexcept { return base_url_; }

private:
    std::string call(const std::string& method, const std::string& path, const std::string& body);

    std::string base_url_;
    HttpOptions options_;
};

// "mock" or an http:// URL.
std::unique_ptr<GenerativeBackend> make_backend(const std::string& spec, HttpOptions options = {});

}  // namespace contrastkit
