#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "contrastkit/color.hpp"

namespace oracle {

// Exhaustive maximum of CIEDE2000 distance from `c` over the n^3 uniform grid
// including both cube faces.
struct GridMax {
    contrastkit::ColorRGB arg;
    double distance = -1.0;
};

inline GridMax grid_max_distance(const contrastkit::ColorRGB& c, int n = 32) {
    GridMax best;
    const contrastkit::ColorLab lc = contrastkit::rgb_to_lab(c);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const contrastkit::ColorRGB g{i / double(n - 1), j / double(n - 1), k / double(n - 1)};
                const double d = contrastkit::delta_e_2000(lc, contrastkit::rgb_to_lab(g));
                if (d > best.distance) best = {g, d};
            }
    return best;
}

inline std::string scan_nearest_name(const contrastkit::ColorRGB& c, const contrastkit::ColorLexicon& lex) {
    std::string name;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : lex.entries()) {
        const double d = contrastkit::delta_e_2000(c, e.color);
        if (d < best || (d == best && e.name < name)) {
            best = d;
            name = e.name;
        }
    }
    return name;
}

// sRGB -> CIELAB in the older decimal formulation (0.008856, 7.787), which
// agrees with the exact-constant form to well under 1e-3.
inline contrastkit::ColorLab reference_lab(const contrastkit::ColorRGB& c) {
    auto lin = [](double u) { return u <= 0.04045 ? u / 12.92 : std::pow((u + 0.055) / 1.055, 2.4); };
    const double r = lin(c.r), g = lin(c.g), b = lin(c.b);
    const double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
    const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
    const double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;
    auto f = [](double t) { return t > 0.008856 ? std::pow(t, 1.0 / 3.0) : 7.787 * t + 16.0 / 116.0; };
    const double fx = f(x / 0.95047), fy = f(y / 1.0), fz = f(z / 1.08883);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

}  // namespace oracle
