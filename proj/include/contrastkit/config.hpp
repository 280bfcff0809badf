#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "contrastkit/auxiliary.hpp"
#include "contrastkit/backend.hpp"
#include "contrastkit/injection.hpp"
#include "contrastkit/layout.hpp"

namespace contrastkit {

struct PipelineConfig {
    EditParadigm paradigm = EditParadigm::diffedit;
    int variations = 4;
    CalibrationParams calibration;
    PatchParams patches;
    InjectionWeights injection;
    LayoutParams layout;
    // Either a fitted model or a fixed strength must be supplied.
    std::optional<std::filesystem::path> strength_model;
    std::optional<double> fixed_strength;
    std::string backend = "mock";
    std::uint64_t seed = 0;

    // Throws ConfigError on out-of-range values or missing files.
    // A strength source may be omitted when the caller supplies a model.
    void validate(bool require_strength_source = true) const;
};

// Unknown keys are rejected. Relative paths resolve against `base_dir`.
PipelineConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir);
PipelineConfig load_config(const std::filesystem::path& path);

// NC_BACKEND_URL, when set and non-empty, replaces the configured backend.
void apply_backend_env(PipelineConfig& cfg);

}  // namespace contrastkit
