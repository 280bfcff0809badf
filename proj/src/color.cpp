#include "contrastkit/color.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <unordered_set>

#include "contrastkit/error.hpp"

namespace contrastkit {

namespace {

constexpr double kPi = std::numbers::pi;

// D65 reference white, 2 degree observer.
constexpr double kWhiteX = 0.95047;
constexpr double kWhiteY = 1.00000;
constexpr double kWhiteZ = 1.08883;

using Mat3 = std::array<std::array<double, 3>, 3>;

constexpr Mat3 kRgbToXyz{{
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
}};

Mat3 invert(const Mat3& m) {
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    Mat3 inv{};
    inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
    inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
    inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
    inv[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
    inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
    inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
    inv[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
    inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
    inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
    return inv;
}

const Mat3& xyz_to_rgb_matrix() {
    static const Mat3 inv = invert(kRgbToXyz);
    return inv;
}

constexpr double kLabEpsilon = 216.0 / 24389.0;  // (6/29)^3
constexpr double kLabKappa = 24389.0 / 27.0;

double lab_f(double t) {
    return t > kLabEpsilon ? std::cbrt(t) : (kLabKappa * t + 16.0) / 116.0;
}

double lab_f_inv(double f) {
    const double cube = f * f * f;
    return cube > kLabEpsilon ? cube : (116.0 * f - 16.0) / kLabKappa;
}

double deg(double rad) { return rad * 180.0 / kPi; }
double rad(double degrees) { return degrees * kPi / 180.0; }

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

bool ColorRGB::valid() const noexcept {
    auto in = [](double v) { return v >= 0.0 && v <= 1.0; };
    return in(r) && in(g) && in(b);
}

ColorRGB ColorRGB::clamped() const noexcept {
    return {std::clamp(r, 0.0, 1.0), std::clamp(g, 0.0, 1.0), std::clamp(b, 0.0, 1.0)};
}

double srgb_to_linear(double c) noexcept {
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double c) noexcept {
    return c <= 0.0031308 ? c * 12.92 : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

double relative_luminance(const ColorRGB& c) noexcept {
    return 0.2126 * srgb_to_linear(c.r) + 0.7152 * srgb_to_linear(c.g) + 0.0722 * srgb_to_linear(c.b);
}

double contrast_ratio_from_luminance(double la, double lb) noexcept {
    const double hi = std::max(la, lb);
    const double lo = std::min(la, lb);
    return (hi + 0.05) / (lo + 0.05);
}

double contrast_ratio(const ColorRGB& a, const ColorRGB& b) noexcept {
    return contrast_ratio_from_luminance(relative_luminance(a), relative_luminance(b));
}

ColorLab rgb_to_lab(const ColorRGB& c) noexcept {
    const double lin[3] = {srgb_to_linear(c.r), srgb_to_linear(c.g), srgb_to_linear(c.b)};
    double xyz[3];
    for (int i = 0; i < 3; ++i)
        xyz[i] = kRgbToXyz[i][0] * lin[0] + kRgbToXyz[i][1] * lin[1] + kRgbToXyz[i][2] * lin[2];
    const double fx = lab_f(xyz[0] / kWhiteX);
    const double fy = lab_f(xyz[1] / kWhiteY);
    const double fz = lab_f(xyz[2] / kWhiteZ);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

ColorRGB lab_to_rgb(const ColorLab& c) noexcept {
    const double fy = (c.l + 16.0) / 116.0;
    const double fx = fy + c.a / 500.0;
    const double fz = fy - c.b / 200.0;
    const double xyz[3] = {kWhiteX * lab_f_inv(fx), kWhiteY * lab_f_inv(fy), kWhiteZ * lab_f_inv(fz)};
    const Mat3& m = xyz_to_rgb_matrix();
    double rgb[3];
    for (int i = 0; i < 3; ++i) {
        const double lin = m[i][0] * xyz[0] + m[i][1] * xyz[1] + m[i][2] * xyz[2];
        rgb[i] = lin < 0.0 ? -linear_to_srgb(-lin) : linear_to_srgb(lin);
    }
    return {rgb[0], rgb[1], rgb[2]};
}

ColorHSV rgb_to_hsv(const ColorRGB& c) noexcept {
    const double mx = std::max({c.r, c.g, c.b});
    const double mn = std::min({c.r, c.g, c.b});
    const double d = mx - mn;
    ColorHSV out{0.0, mx > 0.0 ? d / mx : 0.0, mx};
    if (d > 0.0) {
        double h;
        if (mx == c.r) {
            h = 60.0 * std::fmod((c.g - c.b) / d, 6.0);
        } else if (mx == c.g) {
            h = 60.0 * ((c.b - c.r) / d + 2.0);
        } else {
            h = 60.0 * ((c.r - c.g) / d + 4.0);
        }
        if (h < 0.0) h += 360.0;
        if (h >= 360.0) h -= 360.0;
        out.h = h;
    }
    return out;
}

ColorRGB hsv_to_rgb(const ColorHSV& c) noexcept {
    const double chroma = c.v * c.s;
    const double hp = std::fmod(c.h, 360.0) / 60.0;
    const double x = chroma * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(hp)) {
        case 0: r = chroma; g = x; break;
        case 1: r = x; g = chroma; break;
        case 2: g = chroma; b = x; break;
        case 3: g = x; b = chroma; break;
        case 4: r = x; b = chroma; break;
        default: r = chroma; b = x; break;
    }
    const double m = c.v - chroma;
    return {r + m, g + m, b + m};
}

double delta_e_2000(const ColorLab& lab1, const ColorLab& lab2) noexcept {
    const double c1 = std::hypot(lab1.a, lab1.b);
    const double c2 = std::hypot(lab2.a, lab2.b);
    const double c_mean = (c1 + c2) / 2.0;
    const double c_mean7 = std::pow(c_mean, 7.0);
    const double g = 0.5 * (1.0 - std::sqrt(c_mean7 / (c_mean7 + std::pow(25.0, 7.0))));

    const double a1p = (1.0 + g) * lab1.a;
    const double a2p = (1.0 + g) * lab2.a;
    const double c1p = std::hypot(a1p, lab1.b);
    const double c2p = std::hypot(a2p, lab2.b);

    auto hue = [](double b, double ap) {
        if (b == 0.0 && ap == 0.0) return 0.0;
        double h = deg(std::atan2(b, ap));
        return h < 0.0 ? h + 360.0 : h;
    };
    const double h1p = hue(lab1.b, a1p);
    const double h2p = hue(lab2.b, a2p);

    const double dl = lab2.l - lab1.l;
    const double dc = c2p - c1p;

    double dh = 0.0;
    if (c1p * c2p != 0.0) {
        dh = h2p - h1p;
        if (dh > 180.0) dh -= 360.0;
        else if (dh < -180.0) dh += 360.0;
    }
    const double dH = 2.0 * std::sqrt(c1p * c2p) * std::sin(rad(dh / 2.0));

    const double l_mean = (lab1.l + lab2.l) / 2.0;
    const double cp_mean = (c1p + c2p) / 2.0;

    double hp_mean = h1p + h2p;
    if (c1p * c2p != 0.0) {
        if (std::fabs(h1p - h2p) <= 180.0) {
            hp_mean /= 2.0;
        } else if (h1p + h2p < 360.0) {
            hp_mean = (hp_mean + 360.0) / 2.0;
        } else {
            hp_mean = (hp_mean - 360.0) / 2.0;
        }
    }

    const double t = 1.0 - 0.17 * std::cos(rad(hp_mean - 30.0)) + 0.24 * std::cos(rad(2.0 * hp_mean)) +
                     0.32 * std::cos(rad(3.0 * hp_mean + 6.0)) - 0.20 * std::cos(rad(4.0 * hp_mean - 63.0));
    const double d_theta = 30.0 * std::exp(-std::pow((hp_mean - 275.0) / 25.0, 2.0));
    const double cp_mean7 = std::pow(cp_mean, 7.0);
    const double rc = 2.0 * std::sqrt(cp_mean7 / (cp_mean7 + std::pow(25.0, 7.0)));
    const double l50 = (l_mean - 50.0) * (l_mean - 50.0);
    const double sl = 1.0 + 0.015 * l50 / std::sqrt(20.0 + l50);
    const double sc = 1.0 + 0.045 * cp_mean;
    const double sh = 1.0 + 0.015 * cp_mean * t;
    const double rt = -std::sin(rad(2.0 * d_theta)) * rc;

    const double tl = dl / sl;
    const double tc = dc / sc;
    const double th = dH / sh;
    return std::sqrt(tl * tl + tc * tc + th * th + rt * tc * th);
}

double delta_e_2000(const ColorRGB& a, const ColorRGB& b) noexcept {
    return delta_e_2000(rgb_to_lab(a), rgb_to_lab(b));
}

OppositeSearch opposite_color_search(const ColorRGB& c, int iterations, int coarse_levels) {
    const ColorLab target = rgb_to_lab(c);
    std::array<double, 3> lo{0.0, 0.0, 0.0};
    std::array<double, 3> hi{1.0, 1.0, 1.0};
    OppositeSearch out;
    out.best_distance = -1.0;
    auto score = [&](const ColorRGB& p) {
        const double d = delta_e_2000(target, rgb_to_lab(p));
        ++out.evaluations;
        if (d > out.best_distance) {
            out.best_distance = d;
            out.best = p;
        }
        return d;
    };

    const int levels = std::clamp(coarse_levels, 0, iterations);
    if (levels > 0) {
        const int n = 1 << levels;
        const int m = n + 1;
        const double step = 1.0 / n;
        std::vector<double> lattice(static_cast<std::size_t>(m) * m * m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < m; ++k)
                    lattice[(static_cast<std::size_t>(i) * m + j) * m + k] = score({i * step, j * step, k * step});
        double best_cell = -1.0;
        int bi = 0, bj = 0, bk = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double cell = -1.0;
                    for (int q = 0; q < 8; ++q)
                        cell = std::max(cell, lattice[(static_cast<std::size_t>(i + ((q >> 2) & 1)) * m +
                                                       (j + ((q >> 1) & 1))) * m + (k + (q & 1))]);
                    if (cell > best_cell) {
                        best_cell = cell;
                        bi = i, bj = j, bk = k;
                    }
                }
        lo = {bi * step, bj * step, bk * step};
        hi = {(bi + 1) * step, (bj + 1) * step, (bk + 1) * step};
        for (int q = 0; q < 8; ++q)
            out.final_corners[static_cast<std::size_t>(q)] = {(q & 4) ? hi[0] : lo[0], (q & 2) ? hi[1] : lo[1],
                                                              (q & 1) ? hi[2] : lo[2]};
    }

    for (int it = levels; it < iterations; ++it) {
        int best_corner = 0;
        double best_here = -1.0;
        for (int k = 0; k < 8; ++k) {
            const ColorRGB corner{(k & 4) ? hi[0] : lo[0], (k & 2) ? hi[1] : lo[1], (k & 1) ? hi[2] : lo[2]};
            out.final_corners[static_cast<std::size_t>(k)] = corner;
            const double d = score(corner);
            if (d > best_here) {
                best_here = d;
                best_corner = k;
            }
        }
        for (int axis = 0; axis < 3; ++axis) {
            const double mid = (lo[static_cast<std::size_t>(axis)] + hi[static_cast<std::size_t>(axis)]) / 2.0;
            const bool upper = (best_corner >> (2 - axis)) & 1;
            (upper ? lo : hi)[static_cast<std::size_t>(axis)] = mid;
        }
    }
    return out;
}

ColorRGB opposite_color(const ColorRGB& c) { return opposite_color_search(c).best; }

ColorRGB parse_hex_color(std::string_view hex) {
    if (!hex.empty() && hex.front() == '#') hex.remove_prefix(1);
    if (hex.size() != 6) throw ValidationError("bad hex color '" + std::string(hex) + "'");
    double ch[3];
    for (int i = 0; i < 3; ++i) {
        const int hi = hex_digit(hex[static_cast<std::size_t>(2 * i)]);
        const int lo = hex_digit(hex[static_cast<std::size_t>(2 * i + 1)]);
        if (hi < 0 || lo < 0) throw ValidationError("bad hex color '" + std::string(hex) + "'");
        ch[i] = (hi * 16 + lo) / 255.0;
    }
    return {ch[0], ch[1], ch[2]};
}

std::string to_hex(const ColorRGB& c) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out = "#";
    for (double v : {c.r, c.g, c.b}) {
        const int byte = static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
        out += digits[byte >> 4];
        out += digits[byte & 15];
    }
    return out;
}

ColorLexicon::ColorLexicon(std::vector<LexiconEntry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw ValidationError("color lexicon is empty");
    std::unordered_set<std::string> seen;
    for (const auto& e : entries_) {
        if (trim(e.name).empty()) throw ValidationError("color lexicon has an empty name");
        if (!seen.insert(lower(e.name)).second)
            throw ValidationError("duplicate color lexicon name '" + e.name + "'");
    }
}

ColorLexicon ColorLexicon::parse(std::string_view text) {
    std::vector<LexiconEntry> entries;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        line = trim(line);
        if (line.empty()) continue;
        const auto comma = line.rfind(',');
        if (comma == std::string_view::npos)
            throw ValidationError("lexicon line " + std::to_string(line_no) + ": expected name,#RRGGBB");
        entries.push_back({lower(trim(line.substr(0, comma))), parse_hex_color(trim(line.substr(comma + 1)))});
    }
    return ColorLexicon(std::move(entries));
}

ColorLexicon ColorLexicon::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open color lexicon " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string nearest_color_name(const ColorRGB& c, const ColorLexicon& lex) {
    const ColorLab target = rgb_to_lab(c);
    const LexiconEntry* best = nullptr;
    double best_d = 0.0;
    for (const auto& e : lex.entries()) {
        const double d = delta_e_2000(target, rgb_to_lab(e.color));
        if (best == nullptr || d < best_d || (d == best_d && e.name < best->name)) {
            best = &e;
            best_d = d;
        }
    }
    return best->name;
}

}  // namespace contrastkit
