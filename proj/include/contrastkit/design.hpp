#pragma once

#include <optional>
#include <string>
#include <vector>

#include "contrastkit/color.hpp"
#include "contrastkit/image.hpp"

namespace contrastkit {

enum class AssetKind { text, graphic };

// Externally segmented object inside an asset region: a binary mask over the
// canvas and the segmenter's confidence.
struct ExternalSegment {
    Mask mask;
    double confidence = 0.0;
};

// Foreground element overlaid on the background.
struct DesignAsset {
    std::string id;
    AssetKind kind = AssetKind::graphic;
    // Position is meaningful only when `positioned` is set; otherwise only
    // the size is known and the layout step chooses (x, y).
    Rect bbox;
    bool positioned = true;
    ColorRGB color;
    std::optional<std::string> content;
    // Canvas-sized glyph/shape coverage in [0, 1].
    std::optional<Mask> raster_mask;
    std::vector<ExternalSegment> segments;
};

struct DesignTemplate {
    int canvas_w = 0;
    int canvas_h = 0;
    std::optional<ImageBuffer> background;
    std::vector<DesignAsset> assets;
    std::vector<std::string> keywords;
    std::optional<std::string> prompt;
    std::vector<Rect> fixed_elements;

    // True when every asset carries a user-chosen position.
    bool has_user_layout() const noexcept;
};

}  // namespace contrastkit
