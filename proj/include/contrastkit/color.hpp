#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace contrastkit {

// sRGB triple with unit-interval channels.
struct ColorRGB {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;

    bool valid() const noexcept;
    ColorRGB clamped() const noexcept;

    friend constexpr bool operator==(const ColorRGB&, const ColorRGB&) = default;
};

// CIELAB under D65 / 2 degree observer. l in [0, 100].
struct ColorLab {
    double l = 0.0;
    double a = 0.0;
    double b = 0.0;

    friend constexpr bool operator==(const ColorLab&, const ColorLab&) = default;
};

// h in degrees [0, 360); s, v in [0, 1].
struct ColorHSV {
    double h = 0.0;
    double s = 0.0;
    double v = 0.0;
};

double srgb_to_linear(double c) noexcept;
double linear_to_srgb(double c) noexcept;

// WCAG relative luminance of linearized sRGB.
double relative_luminance(const ColorRGB& c) noexcept;

// WCAG contrast ratio (L_hi + 0.05) / (L_lo + 0.05), in [1, 21].
double contrast_ratio(const ColorRGB& a, const ColorRGB& b) noexcept;
double contrast_ratio_from_luminance(double la, double lb) noexcept;

ColorLab rgb_to_lab(const ColorRGB& c) noexcept;
// Unclamped inverse; callers that need a displayable color use clamped().
ColorRGB lab_to_rgb(const ColorLab& c) noexcept;

ColorHSV rgb_to_hsv(const ColorRGB& c) noexcept;
ColorRGB hsv_to_rgb(const ColorHSV& c) noexcept;

double delta_e_2000(const ColorLab& a, const ColorLab& b) noexcept;
double delta_e_2000(const ColorRGB& a, const ColorRGB& b) noexcept;

// Trace of the octant search behind opposite_color.
struct OppositeSearch {
    ColorRGB best;
    double best_distance = 0.0;
    // Corners of the box evaluated in the last iteration, (R,G,B) lexicographic.
    std::array<ColorRGB, 8> final_corners{};
    int evaluations = 0;
};

inline constexpr int kOppositeSearchIterations = 8;
inline constexpr int kOppositeCoarseLevels = 4;

// Octant binary search over the RGB cube for the color farthest from `c`
// in CIEDE2000. The first `coarse_levels` bisections are evaluated in full on
// a (2^L + 1)^3 lattice, since the hue-mean discontinuity of CIEDE2000 puts
// thin ridges where greedy descent loses them. The remaining iterations score
// the 8 box corners and shrink the box to the octant touching the best one.
// Ties go to the lowest lexicographic corner or cell.
OppositeSearch opposite_color_search(const ColorRGB& c, int iterations = kOppositeSearchIterations,
                                     int coarse_levels = kOppositeCoarseLevels);
ColorRGB opposite_color(const ColorRGB& c);

// "#RRGGBB" (case-insensitive, leading '#' optional).
ColorRGB parse_hex_color(std::string_view hex);
std::string to_hex(const ColorRGB& c);

struct LexiconEntry {
    std::string name;
    ColorRGB color;
};

class ColorLexicon {
public:
    // Throws ValidationError on empty input, duplicate names or bad lines.
    explicit ColorLexicon(std::vector<LexiconEntry> entries);

    // Parses `name,#RRGGBB` lines; '#' at line start begins a comment.
    static ColorLexicon parse(std::string_view text);
    static ColorLexicon load(const std::filesystem::path& path);
    // The 148 CSS extended color keywords.
    static const ColorLexicon& css();

    const std::vector<LexiconEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }

private:
    std::vector<LexiconEntry> entries_;
};

// Lexicon name with the smallest CIEDE2000 distance to `c`; exact ties go to
// the alphabetically first name.
std::string nearest_color_name(const ColorRGB& c, const ColorLexicon& lex);

}  // namespace contrastkit
