#pragma once

#include <filesystem>
#include <string_view>

#include "contrastkit/design.hpp"

namespace contrastkit {

// Reads a template document. Relative image paths resolve against the
// template's directory. Violations throw ValidationError with a JSON-pointer
// location, e.g. "/assets/1/bbox: ...".
DesignTemplate load_template(const std::filesystem::path& path);
DesignTemplate parse_template(std::string_view json_text, const std::filesystem::path& base_dir);

// Structural checks shared by the loader and programmatic construction.
void validate_template(const DesignTemplate& t);

// Prompt given explicitly, else keywords joined with ", ".
std::optional<std::string> template_prompt(const DesignTemplate& t);

}  // namespace contrastkit
