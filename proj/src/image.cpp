#include "contrastkit/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <memory>

#include "contrastkit/error.hpp"

namespace contrastkit {

Rect clip_rect(const Rect& r, int width, int height) noexcept {
    const int x0 = std::clamp(r.x, 0, width);
    const int y0 = std::clamp(r.y, 0, height);
    const int x1 = std::clamp(r.x + r.w, 0, width);
    const int y1 = std::clamp(r.y + r.h, 0, height);
    return {x0, y0, std::max(0, x1 - x0), std::max(0, y1 - y0)};
}

ImageBuffer::ImageBuffer(int width, int height, int channels, float fill)
    : width_(width), height_(height), channels_(channels) {
    if (width < 0 || height < 0 || channels < 1) {
        throw ValidationError("invalid image shape");
    }
    data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

Mask rect_mask(const Rect& r, int width, int height) {
    Mask m(width, height, 1, 0.0f);
    const Rect c = clip_rect(r, width, height);
    for (int y = c.y; y < c.bottom(); ++y)
        for (int x = c.x; x < c.right(); ++x) m.at(x, y) = 1.0f;
    return m;
}

ImageBuffer crop(const ImageBuffer& img, const Rect& r) {
    if (!r.inside(img.width(), img.height())) throw ValidationError("crop rectangle outside image");
    ImageBuffer out(r.w, r.h, img.channels());
    for (int y = 0; y < r.h; ++y)
        for (int x = 0; x < r.w; ++x)
            for (int c = 0; c < img.channels(); ++c) out.at(x, y, c) = img.at(r.x + x, r.y + y, c);
    return out;
}

namespace {

std::uint8_t to_byte(float v) {
    const float clamped = std::clamp(v, 0.0f, 1.0f);
    return static_cast<std::uint8_t>(std::lround(clamped * 255.0f));
}

png_uint_32 format_for(int channels) {
    switch (channels) {
        case 1: return PNG_FORMAT_GRAY;
        case 3: return PNG_FORMAT_RGB;
        default: throw ValidationError("PNG export supports 1 or 3 channels");
    }
}

std::vector<std::uint8_t> to_bytes(const ImageBuffer& img) {
    std::vector<std::uint8_t> bytes(img.data().size());
    std::transform(img.data().begin(), img.data().end(), bytes.begin(), to_byte);
    return bytes;
}

ImageBuffer from_bytes(const std::vector<std::uint8_t>& bytes, int w, int h, int channels) {
    ImageBuffer img(w, h, channels);
    auto out = img.data();
    for (std::size_t i = 0; i < bytes.size(); ++i) out[i] = bytes[i] / 255.0f;
    return img;
}

struct PngImage {
    png_image image{};
    PngImage() {
        image.version = PNG_IMAGE_VERSION;
    }
    ~PngImage() { png_image_free(&image); }
    PngImage(const PngImage&) = delete;
    PngImage& operator=(const PngImage&) = delete;
};

ImageBuffer finish_read(PngImage& png, int channels, const std::string& origin) {
    if (channels != 1 && channels != 3) throw ValidationError("PNG import supports 1 or 3 channels");
    png.image.format = format_for(channels);
    std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(png.image));
    if (!png_image_finish_read(&png.image, nullptr, buffer.data(), 0, nullptr)) {
        throw ValidationError("cannot decode PNG " + origin + ": " + png.image.message);
    }
    return from_bytes(buffer, static_cast<int>(png.image.width), static_cast<int>(png.image.height), channels);
}

}  // namespace

ImageBuffer load_png(const std::filesystem::path& path, int channels) {
    PngImage png;
    if (!png_image_begin_read_from_file(&png.image, path.c_str())) {
        throw ValidationError("cannot read PNG " + path.string() + ": " + png.image.message);
    }
    return finish_read(png, channels, path.string());
}

ImageBuffer decode_png(std::span<const std::uint8_t> bytes, int channels) {
    PngImage png;
    if (!png_image_begin_read_from_memory(&png.image, bytes.data(), bytes.size())) {
        throw ValidationError(std::string("cannot decode PNG bytes: ") + png.image.message);
    }
    return finish_read(png, channels, "bytes");
}

std::vector<std::uint8_t> encode_png(const ImageBuffer& img) {
    PngImage png;
    png.image.width = static_cast<png_uint_32>(img.width());
    png.image.height = static_cast<png_uint_32>(img.height());
    png.image.format = format_for(img.channels());
    const auto pixels = to_bytes(img);
    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&png.image, nullptr, &size, 0, pixels.data(), 0, nullptr)) {
        throw ValidationError(std::string("cannot encode PNG: ") + png.image.message);
    }
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&png.image, out.data(), &size, 0, pixels.data(), 0, nullptr)) {
        throw ValidationError(std::string("cannot encode PNG: ") + png.image.message);
    }
    out.resize(size);
    return out;
}

void save_png(const std::filesystem::path& path, const ImageBuffer& img) {
    PngImage png;
    png.image.width = static_cast<png_uint_32>(img.width());
    png.image.height = static_cast<png_uint_32>(img.height());
    png.image.format = format_for(img.channels());
    const auto pixels = to_bytes(img);
    if (!png_image_write_to_file(&png.image, path.c_str(), 0, pixels.data(), 0, nullptr)) {
        throw ValidationError("cannot write PNG " + path.string() + ": " + png.image.message);
    }
}

ImageBuffer quantize8(const ImageBuffer& img) {
    ImageBuffer out = img;
    for (float& v : out.data()) v = to_byte(v) / 255.0f;
    return out;
}

}  // namespace contrastkit
