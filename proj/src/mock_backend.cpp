#include <algorithm>

#include "contrastkit/backend.hpp"
#include "contrastkit/color.hpp"
#include "contrastkit/error.hpp"
#include "contrastkit/rng.hpp"

namespace contrastkit {

std::uint64_t fnv1a64(std::string_view text) noexcept {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

double mock_embed_norm(std::string_view text) noexcept {
    return 10.0 + static_cast<double>(fnv1a64(text) % 2000) / 100.0;
}

ImageBuffer box_blur5(const ImageBuffer& img) {
    const int w = img.width();
    const int h = img.height();
    const int ch = img.channels();
    ImageBuffer rows(w, h, ch);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < ch; ++c) {
                float s = 0.0f;
                for (int d = -2; d <= 2; ++d) s += img.at(std::clamp(x + d, 0, w - 1), y, c);
                rows.at(x, y, c) = s;
            }
    ImageBuffer out(w, h, ch);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < ch; ++c) {
                float s = 0.0f;
                for (int d = -2; d <= 2; ++d) s += rows.at(x, std::clamp(y + d, 0, h - 1), c);
                out.at(x, y, c) = s / 25.0f;
            }
    return out;
}

BackendIdentity MockBackend::identity() { return {std::string(kIdentity), kEmbedDim}; }

Prompt MockBackend::caption(const ImageBuffer& img) {
    if (img.empty() || img.channels() != 3) throw ValidationError("caption needs a non-empty RGB image");
    double acc[3] = {0, 0, 0};
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            for (int c = 0; c < 3; ++c) acc[c] += img.at(x, y, c);
    const double n = static_cast<double>(img.pixel_count());
    const ColorRGB mean{acc[0] / n, acc[1] / n, acc[2] / n};
    return Prompt("a background image with dominant color " + nearest_color_name(mean, ColorLexicon::css()),
                  PromptSource::caption);
}

double MockBackend::embed_norm(const Prompt& p) { return mock_embed_norm(p.text()); }

ImageBuffer MockBackend::edit(const EditRequest& req) {
    req.validate();
    const ImageBuffer& src = req.image;
    if (req.strength == 0.0) return src;
    const float s = static_cast<float>(req.strength);
    const ImageBuffer blurred = box_blur5(src);
    const bool masked = req.paradigm == EditParadigm::diffedit;
    // Noise is an integer draw per (pixel, channel) scaled at the end, so it
    // does not depend on traversal order.
    const float amp = req.seed == 0 ? 0.0f : 0.05f * s;
    ImageBuffer out = src;
    const int w = src.width();
    for (int y = 0; y < src.height(); ++y)
        for (int x = 0; x < w; ++x) {
            const float m = masked ? req.mask->at(x, y) : 1.0f;
            if (m <= 0.0f) continue;
            const std::uint64_t idx = static_cast<std::uint64_t>(y) * w + x;
            for (int c = 0; c < 3; ++c) {
                const float p = src.at(x, y, c);
                float v = (1.0f - s) * p + s * blurred.at(x, y, c);
                if (amp > 0.0f) {
                    const std::int64_t q =
                        static_cast<std::int64_t>(hash_combine(req.seed, idx * 3 + c) >> 40) - (1LL << 23);
                    v += amp * (static_cast<float>(q) * 0x1.0p-23f);
                }
                out.at(x, y, c) = std::clamp(p + m * (v - p), 0.0f, 1.0f);
            }
        }
    return out;
}

}  // namespace contrastkit
