#pragma once

#include <cstddef>
#include <vector>

namespace ocular {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

double distance(const Point& a, const Point& b);

/// Row-major grid of real-valued intensities. Values are nominally in
/// [0, 255] but are not clamped until written to disk.
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(int width, int height, double fill = 0.0);
    GrayImage(int width, int height, std::vector<double> pixels);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return pixels_.size(); }
    bool empty() const { return pixels_.empty(); }

    double& operator()(int x, int y) { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
    double operator()(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }

    /// Nearest-border replication for out-of-range coordinates.
    double clamped(int x, int y) const;

    const std::vector<double>& pixels() const { return pixels_; }
    std::vector<double>& pixels() { return pixels_; }

    std::vector<double> column(int x) const;
    std::vector<double> row(int y) const;

    bool operator==(const GrayImage& other) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> pixels_;
};

/// Samples on rings around an origin: samples[r * angles + a] is the value at
/// radius r (pixels) and angle 2*pi*a/angles.
struct PolarImage {
    Point origin;
    int radii = 0;
    int angles = 0;
    std::vector<double> samples;

    double at(int r, int a) const { return samples[static_cast<std::size_t>(r) * angles + a]; }
    std::vector<double> ring(int r) const;
};

struct NoiseSpec {
    double variance = 0.0;
    unsigned long long seed = 0;
};

GrayImage gamma_correct(const GrayImage& img, double gamma);
PolarImage to_polar(const GrayImage& img, Point center, int radii, int angles = 360);
GrayImage add_noise(const GrayImage& img, const NoiseSpec& spec);

GrayImage transpose(const GrayImage& img);
GrayImage mirror_horizontal(const GrayImage& img);
GrayImage scale_intensity(const GrayImage& img, double factor);
GrayImage offset_intensity(const GrayImage& img, double offset);

/// Bilinear sample with nearest-border clamping.
double sample_bilinear(const GrayImage& img, double x, double y);

double mean(const std::vector<double>& v);
/// Population variance (divides by n).
double variance(const std::vector<double>& v);

}  // namespace ocular
