#include "contrastkit/backend.hpp"

#include <cmath>

#include "contrastkit/error.hpp"

namespace contrastkit {

std::string_view to_string(EditParadigm p) noexcept {
    return p == EditParadigm::diffedit ? "diffedit" : "sdedit";
}

EditParadigm parse_paradigm(std::string_view s) {
    if (s == "sdedit") return EditParadigm::sdedit;
    if (s == "diffedit") return EditParadigm::diffedit;
    throw ConfigError("unknown paradigm '" + std::string(s) + "' (expected sdedit or diffedit)");
}

void EditRequest::validate() const {
    if (image.empty() || image.channels() != 3) throw ValidationError("edit image must be a non-empty RGB raster");
    if (!(strength >= 0.0 && strength <= 1.0)) throw ValidationError("edit strength must lie in [0, 1]");
    if (paradigm == EditParadigm::diffedit && !mask) throw ValidationError("diffedit request requires a mask");
    if (mask) {
        if (mask->channels() != 1 || mask->width() != image.width() || mask->height() != image.height())
            throw ValidationError("edit mask must be single-channel and match the image size");
    }
}

std::unique_ptr<GenerativeBackend> make_backend(const std::string& spec, HttpOptions options) {
    if (spec == "mock") return std::make_unique<MockBackend>();
    if (spec.rfind("http://", 0) == 0) return std::make_unique<HttpBackend>(spec, options);
    throw ConfigError("backend must be 'mock' or an http:// URL, got '" + spec + "'");
}

}  // namespace contrastkit
