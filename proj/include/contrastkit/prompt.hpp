#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "contrastkit/color.hpp"

namespace contrastkit {

enum class PromptSource { user, caption };

// Conditioning text for the generative backend. Never blank.
class Prompt {
public:
    explicit Prompt(std::string text, PromptSource source = PromptSource::user);

    const std::string& text() const noexcept { return text_; }
    PromptSource source() const noexcept { return source_; }

    friend bool operator==(const Prompt&, const Prompt&) = default;

private:
    std::string text_;
    PromptSource source_;
};

std::string_view to_string(PromptSource s) noexcept;

// Byte range [start, end) of a lexicon color name inside a prompt.
struct ColorTermSpan {
    std::size_t start = 0;
    std::size_t end = 0;
    std::string matched_name;

    friend bool operator==(const ColorTermSpan&, const ColorTermSpan&) = default;
};

// Case-insensitive whole-word matches of lexicon names, longest match first,
// sorted by offset and non-overlapping. Word characters are ASCII
// alphanumerics and any non-ASCII byte, so UTF-8 letters never split a word.
std::vector<ColorTermSpan> detect_color_terms(const Prompt& p, const ColorLexicon& lex);

// Name substituted for every chromatic term when the emphasized asset has
// color `asset_color`.
std::string substitute_color_name(const ColorRGB& asset_color, const ColorLexicon& lex);

Prompt clean_prompt(const Prompt& p, const ColorRGB& asset_color, const ColorLexicon& lex);
// Same, with the substitute already resolved.
Prompt replace_color_terms(const Prompt& p, const std::string& substitute, const ColorLexicon& lex);

}  // namespace contrastkit
