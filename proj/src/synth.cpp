#include "ocular/synth.hpp"

#include <algorithm>
#include <cmath>

#include "ocular/errors.hpp"

namespace ocular {

GrayImage synth_step_edge(int w, int h, double low, double high, int boundary, std::optional<Rect> square) {
    if (w <= 0 || h <= 0) throw InvalidArgument("synth_step_edge: empty image");
    GrayImage img(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const bool high_side = x >= boundary;
            bool bright = high_side;
            if (square && square->contains(x, y)) bright = !bright;
            img(x, y) = bright ? high : low;
        }
    }
    return img;
}

GrayImage synth_grating(int w, int h, int period, double decay) {
    if (w <= 0 || h <= 0) throw InvalidArgument("synth_grating: empty image");
    if (period < 2) throw InvalidArgument("synth_grating: period must be >= 2");
    if (decay < 0.0) throw InvalidArgument("synth_grating: decay must be >= 0");
    GrayImage img(w, h);
    for (int x = 0; x < w; ++x) {
        const bool on = (x % period) < period / 2;
        const double value = on ? 255.0 * std::pow(1.0 + x, -decay) : 0.0;
        for (int y = 0; y < h; ++y) img(x, y) = value;
    }
    return img;
}

std::string shape_name(ShapeKind kind) {
    switch (kind) {
        case ShapeKind::Rectangle: return "rectangle";
        case ShapeKind::Disc: return "disc";
        case ShapeKind::Ellipse: return "ellipse";
        case ShapeKind::Triangle: return "triangle";
        case ShapeKind::Ring: return "ring";
        case ShapeKind::Cross: return "cross";
        case ShapeKind::Diamond: return "diamond";
        case ShapeKind::TwoSquares: return "two-squares";
        case ShapeKind::LShape: return "l-shape";
        case ShapeKind::Stripes: return "stripes";
    }
    return "unknown";
}

namespace {

bool inside_shape(ShapeKind kind, double u, double v) {
    // u, v are normalized coordinates in [-1, 1] with the origin at the center.
    switch (kind) {
        case ShapeKind::Rectangle: return std::abs(u) <= 0.55 && std::abs(v) <= 0.4;
        case ShapeKind::Disc: return u * u + v * v <= 0.5 * 0.5;
        case ShapeKind::Ellipse: return (u * u) / (0.7 * 0.7) + (v * v) / (0.4 * 0.4) <= 1.0;
        case ShapeKind::Triangle: return v <= 0.5 && v >= -0.6 + 2.0 * std::abs(u);
        case ShapeKind::Ring: {
            const double r2 = u * u + v * v;
            return r2 <= 0.65 * 0.65 && r2 >= 0.35 * 0.35;
        }
        case ShapeKind::Cross: return (std::abs(u) <= 0.2 && std::abs(v) <= 0.7) || (std::abs(v) <= 0.2 && std::abs(u) <= 0.7);
        case ShapeKind::Diamond: return std::abs(u) + std::abs(v) <= 0.6;
        case ShapeKind::TwoSquares:
            return (u >= -0.7 && u <= -0.15 && v >= -0.6 && v <= -0.05) || (u >= 0.15 && u <= 0.7 && v >= 0.05 && v <= 0.6);
        case ShapeKind::LShape:
            return (u >= -0.6 && u <= -0.2 && v >= -0.6 && v <= 0.6) || (u >= -0.6 && u <= 0.6 && v >= 0.2 && v <= 0.6);
        case ShapeKind::Stripes: return std::abs(v) <= 0.7 && std::fmod(u + 1.0, 0.5) < 0.25;
    }
    return false;
}

}  // namespace

GrayImage synth_shape(ShapeKind kind, int w, int h, double low, double high) {
    if (w <= 0 || h <= 0) throw InvalidArgument("synth_shape: empty image");
    GrayImage img(w, h, low);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double u = (2.0 * x + 1.0) / w - 1.0;
            const double v = (2.0 * y + 1.0) / h - 1.0;
            if (inside_shape(kind, u, v)) img(x, y) = high;
        }
    }
    return img;
}

namespace {

struct EyeGeometry {
    const SynthEyeSpec& spec;
    Point left;
    Point right;
    double lid_line;

    double value_at(double x, double y) const {
        const double mid_x = 0.5 * (left.x + right.x);
        const double half_span = 0.5 * (right.x - left.x);
        const double t = (x - mid_x) / half_span;
        const double corner_y = left.y + (right.y - left.y) * (x - left.x) / (right.x - left.x);
        bool in_almond = false;
        if (std::abs(t) <= 1.0) {
            const double shape = 1.0 - t * t;
            const double top = corner_y - spec.upper_bulge * spec.height * shape;
            const double bottom = corner_y + spec.lower_bulge * spec.height * shape;
            in_almond = y >= top && y <= bottom;
        }
        if (!in_almond || y <= lid_line) return spec.intensity.skin;

        const double dx = x - spec.pupil_center.x;
        const double dy = y - spec.pupil_center.y;
        const double r2 = dx * dx + dy * dy;
        if (spec.specular_radius > 0.0) {
            const double sx = x - spec.specular_center.x;
            const double sy = y - spec.specular_center.y;
            if (sx * sx + sy * sy <= spec.specular_radius * spec.specular_radius) return spec.specular_intensity;
        }
        if (r2 <= spec.pupil_radius * spec.pupil_radius) return spec.intensity.pupil;
        if (r2 <= spec.iris_radius * spec.iris_radius) return spec.intensity.iris;
        return spec.intensity.sclera;
    }
};

}  // namespace

SyntheticEye synth_eye(const SynthEyeSpec& spec) {
    if (spec.width < 8 || spec.height < 8) throw InvalidArgument("synth_eye: image must be at least 8x8");
    if (spec.pupil_radius <= 0.0 || spec.iris_radius < spec.pupil_radius)
        throw InvalidArgument("synth_eye: need 0 < pupil_radius <= iris_radius");
    if (spec.lid_coverage < 0.0 || spec.lid_coverage > 1.0)
        throw InvalidArgument("synth_eye: lid_coverage must be in [0, 1]");
    if (spec.supersample < 1) throw InvalidArgument("synth_eye: supersample must be >= 1");

    const int cx = spec.width / 2;
    const double corner_y = spec.height / 2;  // integer row
    const double reach = spec.width / 2 - 1;
    EyeGeometry geo{spec,
                    spec.left_corner.value_or(Point{cx - reach, corner_y}),
                    spec.right_corner.value_or(Point{cx + reach, corner_y}),
                    0.0};
    if (!(geo.right.x > geo.left.x)) throw InvalidArgument("synth_eye: right corner must be right of left corner");
    const double iris_top = spec.pupil_center.y - spec.iris_radius;
    geo.lid_line = spec.lid_coverage > 0.0 ? iris_top + spec.lid_coverage * 2.0 * spec.iris_radius : -1e300;

    SyntheticEye eye;
    eye.image = GrayImage(spec.width, spec.height);
    const int s = spec.supersample;
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            double acc = 0.0;
            for (int j = 0; j < s; ++j)
                for (int i = 0; i < s; ++i)
                    acc += geo.value_at(x + (i + 0.5) / s - 0.5, y + (j + 0.5) / s - 0.5);
            eye.image(x, y) = acc / (s * s);
        }
    }
    eye.pupil_center = spec.pupil_center;
    eye.pupil_radius = spec.pupil_radius;
    eye.iris_radius = spec.iris_radius;
    eye.lid_coverage = spec.lid_coverage;
    eye.left_corner = geo.left;
    eye.right_corner = geo.right;
    return eye;
}

SyntheticEye synth_eye(int w, int h, Point pupil_center, double pupil_radius, double iris_radius,
                       double lid_coverage) {
    SynthEyeSpec spec;
    spec.width = w;
    spec.height = h;
    spec.pupil_center = pupil_center;
    spec.pupil_radius = pupil_radius;
    spec.iris_radius = iris_radius;
    spec.lid_coverage = lid_coverage;
    return synth_eye(spec);
}

SynthEyeSpec eye_spec_at_angle(SynthEyeSpec base, double angle_deg, double half_view_angle) {
    if (!(half_view_angle > 0.0)) throw InvalidArgument("half_view_angle must be positive");
    const int cx = base.width / 2;
    const double reach = base.width / 2 - 1;
    const Point left = base.left_corner.value_or(Point{cx - reach, static_cast<double>(base.height / 2)});
    const Point right = base.right_corner.value_or(Point{cx + reach, static_cast<double>(base.height / 2)});
    base.left_corner = left;
    base.right_corner = right;
    const double half = 0.5 * distance(left, right);
    const double ux = (right.x - left.x) / (2.0 * half);
    const double uy = (right.y - left.y) / (2.0 * half);
    const double offset = angle_deg / half_view_angle * half;
    base.pupil_center = Point{0.5 * (left.x + right.x) + offset * ux, 0.5 * (left.y + right.y) + offset * uy};
    return base;
}

}  // namespace ocular
