#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace contrastkit {

// Axis-aligned pixel rectangle; (x, y) is the top-left corner.
struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    constexpr long long area() const noexcept { return static_cast<long long>(w) * h; }
    constexpr int right() const noexcept { return x + w; }
    constexpr int bottom() const noexcept { return y + h; }
    constexpr double center_x() const noexcept { return x + w / 2.0; }
    constexpr double center_y() const noexcept { return y + h / 2.0; }

    constexpr bool contains(int px, int py) const noexcept {
        return px >= x && px < x + w && py >= y && py < y + h;
    }
    constexpr bool inside(int width, int height) const noexcept {
        return x >= 0 && y >= 0 && w > 0 && h > 0 && x + w <= width && y + h <= height;
    }

    friend constexpr bool operator==(const Rect&, const Rect&) = default;
};

constexpr long long intersection_area(const Rect& a, const Rect& b) noexcept {
    const int x0 = a.x > b.x ? a.x : b.x;
    const int y0 = a.y > b.y ? a.y : b.y;
    const int x1 = a.right() < b.right() ? a.right() : b.right();
    const int y1 = a.bottom() < b.bottom() ? a.bottom() : b.bottom();
    if (x1 <= x0 || y1 <= y0) return 0;
    return static_cast<long long>(x1 - x0) * (y1 - y0);
}

Rect clip_rect(const Rect& r, int width, int height) noexcept;

// Row-major interleaved float raster. RGB images carry 3 channels with values
// in [0, 1]; masks and saliency maps are single-channel.
class ImageBuffer {
public:
    ImageBuffer() = default;
    ImageBuffer(int width, int height, int channels, float fill = 0.0f);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int channels() const noexcept { return channels_; }
    bool empty() const noexcept { return data_.empty(); }
    std::size_t pixel_count() const noexcept { return static_cast<std::size_t>(width_) * height_; }

    float& at(int x, int y, int c = 0) noexcept {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }
    float at(int x, int y, int c = 0) const noexcept {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }

    std::span<float> data() noexcept { return data_; }
    std::span<const float> data() const noexcept { return data_; }

    bool same_shape(const ImageBuffer& o) const noexcept {
        return width_ == o.width_ && height_ == o.height_ && channels_ == o.channels_;
    }

    friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    int channels_ = 0;
    std::vector<float> data_;
};

// Single-channel raster in [0, 1].
using Mask = ImageBuffer;

// Mask that is 1 inside `r` and 0 elsewhere.
Mask rect_mask(const Rect& r, int width, int height);

ImageBuffer crop(const ImageBuffer& img, const Rect& r);

// 8-bit PNG I/O. Loading always yields the requested channel count (3 or 1),
// converting grayscale/alpha layouts as needed.
ImageBuffer load_png(const std::filesystem::path& path, int channels = 3);
void save_png(const std::filesystem::path& path, const ImageBuffer& img);
std::vector<std::uint8_t> encode_png(const ImageBuffer& img);
ImageBuffer decode_png(std::span<const std::uint8_t> bytes, int channels = 3);

// Round to the 8-bit grid the PNG codec stores.
ImageBuffer quantize8(const ImageBuffer& img);

}  // namespace contrastkit
