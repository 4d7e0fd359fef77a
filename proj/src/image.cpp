#include "ocular/image.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "ocular/errors.hpp"

namespace ocular {

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

GrayImage::GrayImage(int width, int height, double fill)
    : width_(width), height_(height) {
    if (width < 0 || height < 0) throw InvalidArgument("image dimensions must be non-negative");
    pixels_.assign(static_cast<std::size_t>(width) * height, fill);
}

GrayImage::GrayImage(int width, int height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width < 0 || height < 0) throw InvalidArgument("image dimensions must be non-negative");
    if (pixels_.size() != static_cast<std::size_t>(width) * height)
        throw InvalidArgument("pixel count does not match width * height");
}

double GrayImage::clamped(int x, int y) const {
    x = std::clamp(x, 0, width_ - 1);
    y = std::clamp(y, 0, height_ - 1);
    return (*this)(x, y);
}

std::vector<double> GrayImage::column(int x) const {
    std::vector<double> out(height_);
    for (int y = 0; y < height_; ++y) out[y] = (*this)(x, y);
    return out;
}

std::vector<double> GrayImage::row(int y) const {
    auto first = pixels_.begin() + static_cast<std::ptrdiff_t>(y) * width_;
    return {first, first + width_};
}

std::vector<double> PolarImage::ring(int r) const {
    auto first = samples.begin() + static_cast<std::ptrdiff_t>(r) * angles;
    return {first, first + angles};
}

GrayImage gamma_correct(const GrayImage& img, double gamma) {
    if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
    GrayImage out = img;
    const double inv = 1.0 / gamma;
    // Negative values (possible after additive noise) map to 0.
    for (double& p : out.pixels()) p = 255.0 * std::pow(std::max(p, 0.0) / 255.0, inv);
    return out;
}

double sample_bilinear(const GrayImage& img, double x, double y) {
    x = std::clamp(x, 0.0, static_cast<double>(img.width() - 1));
    y = std::clamp(y, 0.0, static_cast<double>(img.height() - 1));
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const int x1 = std::min(x0 + 1, img.width() - 1);
    const int y1 = std::min(y0 + 1, img.height() - 1);
    const double fx = x - x0;
    const double fy = y - y0;
    const double top = (1.0 - fx) * img(x0, y0) + fx * img(x1, y0);
    const double bottom = (1.0 - fx) * img(x0, y1) + fx * img(x1, y1);
    return (1.0 - fy) * top + fy * bottom;
}

PolarImage to_polar(const GrayImage& img, Point center, int radii, int angles) {
    if (img.empty()) throw InvalidArgument("to_polar: empty image");
    if (radii < 1) throw InvalidArgument("to_polar: radii must be >= 1");
    if (angles < 8) throw InvalidArgument("to_polar: angles must be >= 8");
    if (center.x < 0.0 || center.y < 0.0 || center.x > img.width() - 1 || center.y > img.height() - 1)
        throw InvalidArgument("to_polar: center outside image");

    PolarImage polar;
    polar.origin = center;
    polar.radii = radii;
    polar.angles = angles;
    polar.samples.resize(static_cast<std::size_t>(radii) * angles);
    for (int r = 0; r < radii; ++r) {
        for (int a = 0; a < angles; ++a) {
            const double theta = 2.0 * std::numbers::pi * a / angles;
            polar.samples[static_cast<std::size_t>(r) * angles + a] =
                sample_bilinear(img, center.x + r * std::cos(theta), center.y + r * std::sin(theta));
        }
    }
    return polar;
}

GrayImage add_noise(const GrayImage& img, const NoiseSpec& spec) {
    if (spec.variance < 0.0) throw InvalidArgument("noise variance must be >= 0");
    GrayImage out = img;
    if (spec.variance == 0.0) return out;
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, std::sqrt(spec.variance));
    for (double& p : out.pixels()) p += noise(rng);
    return out;
}

GrayImage transpose(const GrayImage& img) {
    GrayImage out(img.height(), img.width());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) out(y, x) = img(x, y);
    return out;
}

GrayImage mirror_horizontal(const GrayImage& img) {
    GrayImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) out(img.width() - 1 - x, y) = img(x, y);
    return out;
}

GrayImage scale_intensity(const GrayImage& img, double factor) {
    GrayImage out = img;
    for (double& p : out.pixels()) p *= factor;
    return out;
}

GrayImage offset_intensity(const GrayImage& img, double offset) {
    GrayImage out = img;
    for (double& p : out.pixels()) p += offset;
    return out;
}

double mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size());
}

}  // namespace ocular
