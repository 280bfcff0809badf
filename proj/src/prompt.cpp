#include "contrastkit/prompt.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "contrastkit/error.hpp"

namespace contrastkit {

namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

struct Word {
    std::size_t start;
    std::size_t end;
    std::string folded;
};

std::string fold(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<Word> split_words(std::string_view text) {
    std::vector<Word> words;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_word_byte(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        while (i < text.size() && is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
        words.push_back({start, i, fold(text.substr(start, i - start))});
    }
    return words;
}

// A lexicon name as a word sequence plus the joiner between consecutive words.
struct NamePattern {
    std::string name;
    std::vector<std::string> words;
    std::vector<char> joiners;  // ' ' or '-'
};

bool separator_matches(std::string_view sep, char joiner) {
    if (joiner == '-') return sep == "-";
    return !sep.empty() &&
           std::all_of(sep.begin(), sep.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

std::unordered_map<std::string, std::vector<NamePattern>> index_lexicon(const ColorLexicon& lex) {
    std::unordered_map<std::string, std::vector<NamePattern>> index;
    for (const auto& e : lex.entries()) {
        NamePattern pat;
        pat.name = e.name;
        const auto words = split_words(e.name);
        if (words.empty()) continue;
        for (std::size_t k = 0; k < words.size(); ++k) {
            pat.words.push_back(words[k].folded);
            if (k + 1 < words.size()) {
                const auto sep = std::string_view(e.name).substr(words[k].end, words[k + 1].start - words[k].end);
                pat.joiners.push_back(sep == "-" ? '-' : ' ');
            }
        }
        index[pat.words.front()].push_back(std::move(pat));
    }
    // Longest patterns first so the first hit is the longest match.
    for (auto& [_, pats] : index) {
        std::sort(pats.begin(), pats.end(), [](const NamePattern& a, const NamePattern& b) {
            if (a.words.size() != b.words.size()) return a.words.size() > b.words.size();
            return a.name < b.name;
        });
    }
    return index;
}

}  // namespace

Prompt::Prompt(std::string text, PromptSource source) : text_(std::move(text)), source_(source) {
    const bool blank = std::all_of(text_.begin(), text_.end(), [](unsigned char c) { return std::isspace(c) != 0; });
    if (blank) throw ValidationError("prompt is empty");
}

std::string_view to_string(PromptSource s) noexcept {
    return s == PromptSource::user ? "user" : "caption";
}

std::vector<ColorTermSpan> detect_color_terms(const Prompt& p, const ColorLexicon& lex) {
    const std::string_view text = p.text();
    const auto words = split_words(text);
    const auto index = index_lexicon(lex);
    std::vector<ColorTermSpan> spans;
    std::size_t i = 0;
    while (i < words.size()) {
        const auto it = index.find(words[i].folded);
        const NamePattern* hit = nullptr;
        if (it != index.end()) {
            for (const auto& pat : it->second) {
                if (i + pat.words.size() > words.size()) continue;
                bool ok = true;
                for (std::size_t k = 1; k < pat.words.size() && ok; ++k) {
                    const auto& prev = words[i + k - 1];
                    const auto& cur = words[i + k];
                    ok = cur.folded == pat.words[k] &&
                         separator_matches(text.substr(prev.end, cur.start - prev.end), pat.joiners[k - 1]);
                }
                if (ok) {
                    hit = &pat;
                    break;
                }
            }
        }
        if (hit == nullptr) {
            ++i;
            continue;
        }
        const std::size_t last = i + hit->words.size() - 1;
        spans.push_back({words[i].start, words[last].end, hit->name});
        i = last + 1;
    }
    return spans;
}

std::string substitute_color_name(const ColorRGB& asset_color, const ColorLexicon& lex) {
    return nearest_color_name(opposite_color(asset_color), lex);
}

Prompt replace_color_terms(const Prompt& p, const std::string& substitute, const ColorLexicon& lex) {
    const auto spans = detect_color_terms(p, lex);
    if (spans.empty()) return p;
    std::string out;
    out.reserve(p.text().size() + spans.size() * substitute.size());
    std::size_t cursor = 0;
    for (const auto& s : spans) {
        out.append(p.text(), cursor, s.start - cursor);
        out += substitute;
        cursor = s.end;
    }
    out.append(p.text(), cursor, std::string::npos);
    return Prompt(std::move(out), p.source());
}

Prompt clean_prompt(const Prompt& p, const ColorRGB& asset_color, const ColorLexicon& lex) {
    return replace_color_terms(p, substitute_color_name(asset_color, lex), lex);
}

}  // namespace contrastkit
