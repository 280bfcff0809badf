#include "contrastkit/saliency.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>

#include "contrastkit/error.hpp"

namespace contrastkit {

namespace {

// FFTW planning is not thread-safe.
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

void fft2d(std::vector<std::complex<double>>& data, int n, int sign) {
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_mutex());
        plan = fftw_plan_dft_2d(n, n, buf, buf, sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard lock(fftw_mutex());
    fftw_destroy_plan(plan);
}

std::vector<double> gaussian_kernel(double sigma) {
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        k[static_cast<std::size_t>(i + radius)] = std::exp(-0.5 * i * i / (sigma * sigma));
        sum += k[static_cast<std::size_t>(i + radius)];
    }
    for (double& v : k) v /= sum;
    return k;
}

int reflect(int i, int n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - i - 1;
    }
    return i;
}

std::vector<double> blur_separable(const std::vector<double>& src, int n, double sigma) {
    const auto k = gaussian_kernel(sigma);
    const int radius = static_cast<int>(k.size() / 2);
    std::vector<double> tmp(src.size()), out(src.size());
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            double acc = 0.0;
            for (int d = -radius; d <= radius; ++d)
                acc += k[static_cast<std::size_t>(d + radius)] * src[static_cast<std::size_t>(y * n + reflect(x + d, n))];
            tmp[static_cast<std::size_t>(y * n + x)] = acc;
        }
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            double acc = 0.0;
            for (int d = -radius; d <= radius; ++d)
                acc += k[static_cast<std::size_t>(d + radius)] * tmp[static_cast<std::size_t>(reflect(y + d, n) * n + x)];
            out[static_cast<std::size_t>(y * n + x)] = acc;
        }
    return out;
}

}  // namespace

SaliencyMap::SaliencyMap(int width, int height, std::vector<float> values)
    : width_(width), height_(height), values_(std::move(values)) {
    if (width <= 0 || height <= 0 || values_.size() != static_cast<std::size_t>(width) * height)
        throw ValidationError("saliency map shape mismatch");
    for (float v : values_)
        if (!(v >= 0.0f && v <= 1.0f)) throw ValidationError("saliency values must lie in [0, 1]");
}

SaliencyMap SaliencyMap::zeros(int width, int height) {
    return SaliencyMap(width, height, std::vector<float>(static_cast<std::size_t>(width) * height, 0.0f));
}

SaliencyMap normalize_saliency(int width, int height, std::vector<float> raw) {
    float mx = 0.0f;
    for (float& v : raw) {
        if (!(v >= 0.0f)) throw ValidationError("saliency scores must be non-negative");
        mx = std::max(mx, v);
    }
    if (mx > 0.0f)
        for (float& v : raw) v = std::min(1.0f, v / mx);
    return SaliencyMap(width, height, std::move(raw));
}

ImageBuffer to_gray(const ImageBuffer& rgb) {
    if (rgb.channels() == 1) return rgb;
    ImageBuffer g(rgb.width(), rgb.height(), 1);
    for (int y = 0; y < rgb.height(); ++y)
        for (int x = 0; x < rgb.width(); ++x)
            g.at(x, y) = 0.299f * rgb.at(x, y, 0) + 0.587f * rgb.at(x, y, 1) + 0.114f * rgb.at(x, y, 2);
    return g;
}

ImageBuffer resample_area(const ImageBuffer& gray, int width, int height) {
    ImageBuffer out(width, height, 1);
    for (int y = 0; y < height; ++y) {
        const int y0 = static_cast<int>(static_cast<long long>(y) * gray.height() / height);
        const int y1 = std::max(y0 + 1, static_cast<int>(static_cast<long long>(y + 1) * gray.height() / height));
        for (int x = 0; x < width; ++x) {
            const int x0 = static_cast<int>(static_cast<long long>(x) * gray.width() / width);
            const int x1 = std::max(x0 + 1, static_cast<int>(static_cast<long long>(x + 1) * gray.width() / width));
            double acc = 0.0;
            for (int yy = y0; yy < y1; ++yy)
                for (int xx = x0; xx < x1; ++xx) acc += gray.at(xx, yy);
            out.at(x, y) = static_cast<float>(acc / ((y1 - y0) * (x1 - x0)));
        }
    }
    return out;
}

ImageBuffer spectral_residual(const ImageBuffer& gray_small) {
    const int n = gray_small.width();
    if (gray_small.height() != n || gray_small.channels() != 1)
        throw ValidationError("spectral residual expects a square single-channel raster");
    const std::size_t count = static_cast<std::size_t>(n) * n;

    double mean = 0.0;
    for (float v : gray_small.data()) mean += v;
    mean /= static_cast<double>(count);
    double var = 0.0;
    for (float v : gray_small.data()) var += (v - mean) * (v - mean);
    if (var / static_cast<double>(count) < 1e-12) return ImageBuffer(n, n, 1, 0.0f);

    std::vector<std::complex<double>> spec(count);
    for (std::size_t i = 0; i < count; ++i) spec[i] = gray_small.data()[i];
    fft2d(spec, n, FFTW_FORWARD);

    std::vector<double> log_amp(count), phase(count);
    for (std::size_t i = 0; i < count; ++i) {
        log_amp[i] = std::log(std::max(std::abs(spec[i]), 1e-12));
        phase[i] = std::arg(spec[i]);
    }
    // Residual against the 3x3 local mean of the (periodic) log spectrum.
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            double acc = 0.0;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx)
                    acc += log_amp[static_cast<std::size_t>(((y + dy + n) % n) * n + (x + dx + n) % n)];
            const std::size_t i = static_cast<std::size_t>(y * n + x);
            spec[i] = std::polar(std::exp(log_amp[i] - acc / 9.0), phase[i]);
        }
    fft2d(spec, n, FFTW_BACKWARD);

    std::vector<double> energy(count);
    for (std::size_t i = 0; i < count; ++i) energy[i] = std::norm(spec[i]);
    energy = blur_separable(energy, n, kSpectralResidualSigma);

    const auto [mn, mx] = std::minmax_element(energy.begin(), energy.end());
    ImageBuffer out(n, n, 1, 0.0f);
    const double range = *mx - *mn;
    if (range <= 1e-300) return out;
    for (std::size_t i = 0; i < count; ++i) out.data()[i] = static_cast<float>((energy[i] - *mn) / range);
    return out;
}

SaliencyMap compute_saliency(const ImageBuffer& img) {
    if (img.empty()) throw ValidationError("saliency of an empty image");
    const int w = img.width();
    const int h = img.height();
    if (w == 1 && h == 1) return SaliencyMap::zeros(1, 1);

    const int n = kSpectralResidualSize;
    const ImageBuffer small = spectral_residual(resample_area(to_gray(img), n, n));

    std::vector<float> values(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y) {
        const double sy = std::clamp((y + 0.5) * n / h - 0.5, 0.0, n - 1.0);
        const int y0 = static_cast<int>(sy);
        const int y1 = std::min(y0 + 1, n - 1);
        const double fy = sy - y0;
        for (int x = 0; x < w; ++x) {
            const double sx = std::clamp((x + 0.5) * n / w - 0.5, 0.0, n - 1.0);
            const int x0 = static_cast<int>(sx);
            const int x1 = std::min(x0 + 1, n - 1);
            const double fx = sx - x0;
            const double top = small.at(x0, y0) * (1 - fx) + small.at(x1, y0) * fx;
            const double bot = small.at(x0, y1) * (1 - fx) + small.at(x1, y1) * fx;
            values[static_cast<std::size_t>(y) * w + x] = static_cast<float>(top * (1 - fy) + bot * fy);
        }
    }
    return normalize_saliency(w, h, std::move(values));
}

double center_bias_factor(double u, double v, double sigma_frac) noexcept {
    const double du = (u - 0.5) / sigma_frac;
    const double dv = (v - 0.5) / sigma_frac;
    return std::exp(-0.5 * (du * du + dv * dv));
}

SaliencyMap apply_center_bias(const SaliencyMap& m, double sigma_frac) {
    const int w = m.width();
    const int h = m.height();
    std::vector<float> values(m.values().size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double f = center_bias_factor((x + 0.5) / w, (y + 0.5) / h, sigma_frac);
            values[static_cast<std::size_t>(y) * w + x] = static_cast<float>(m.at(x, y) * f);
        }
    return normalize_saliency(w, h, std::move(values));
}

SaliencyMap saliency_from_gray(const ImageBuffer& gray) {
    if (gray.channels() != 1) throw ValidationError("saliency raster must be single-channel");
    std::vector<float> values(gray.data().begin(), gray.data().end());
    for (float& v : values) v = std::clamp(v, 0.0f, 1.0f);
    return SaliencyMap(gray.width(), gray.height(), std::move(values));
}

SaliencyMap load_saliency_png(const std::filesystem::path& path) {
    return saliency_from_gray(load_png(path, 1));
}

}  // namespace contrastkit
