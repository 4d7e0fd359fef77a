#pragma once

#include <optional>
#include <string>

#include "ocular/image.hpp"

namespace ocular {

struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;
    bool contains(int px, int py) const { return px >= x && px < x + w && py >= y && py < y + h; }
};

/// Columns [0, boundary) take `low`, the rest `high`. An optional square is
/// drawn with the intensity opposite to whichever region surrounds it.
GrayImage synth_step_edge(int w, int h, double low, double high, int boundary,
                          std::optional<Rect> square = std::nullopt);

/// Column-constant square-wave grating, bright for the first half of each
/// period, with amplitude 255 * (1 + x)^(-decay).
GrayImage synth_grating(int w, int h, int period, double decay);

enum class ShapeKind { Rectangle, Disc, Ellipse, Triangle, Ring, Cross, Diamond, TwoSquares, LShape, Stripes };

inline constexpr ShapeKind kAllShapes[] = {ShapeKind::Rectangle, ShapeKind::Disc,     ShapeKind::Ellipse,
                                          ShapeKind::Triangle,  ShapeKind::Ring,     ShapeKind::Cross,
                                          ShapeKind::Diamond,   ShapeKind::TwoSquares, ShapeKind::LShape,
                                          ShapeKind::Stripes};

std::string shape_name(ShapeKind kind);

/// Two-level image: `high` inside the shape, `low` outside.
GrayImage synth_shape(ShapeKind kind, int w, int h, double low, double high);

struct EyeIntensities {
    double pupil = 20.0;
    double iris = 80.0;
    double sclera = 220.0;
    double skin = 90.0;
};

struct SynthEyeSpec {
    int width = 50;
    int height = 25;
    Point pupil_center{25.0, 12.0};
    double pupil_radius = 4.0;
    double iris_radius = 8.0;
    /// Fraction of the iris diameter hidden by the upper lid, from the top.
    double lid_coverage = 0.0;
    EyeIntensities intensity;
    /// Eye corners; when unset they sit one pixel inside the horizontal ends,
    /// symmetric about column width/2, at row height/2.
    std::optional<Point> left_corner;
    std::optional<Point> right_corner;
    /// Upper and lower bulge of the almond outline as fractions of height.
    double upper_bulge = 0.46;
    double lower_bulge = 0.40;
    /// Optional bright specular blob (radius 0 disables it).
    Point specular_center{0.0, 0.0};
    double specular_radius = 0.0;
    double specular_intensity = 255.0;
    /// Sub-samples per pixel side; values above 1 anti-alias the outlines.
    int supersample = 1;
};

struct SyntheticEye {
    GrayImage image;
    Point pupil_center;
    double pupil_radius = 0.0;
    double iris_radius = 0.0;
    double lid_coverage = 0.0;
    Point left_corner;
    Point right_corner;
};

SyntheticEye synth_eye(const SynthEyeSpec& spec);

/// Convenience form matching the generator's parameter list.
SyntheticEye synth_eye(int w, int h, Point pupil_center, double pupil_radius, double iris_radius,
                       double lid_coverage);

/// Places the pupil on the corner axis so that relative_position reports
/// `angle_deg` for the given half view angle.
SynthEyeSpec eye_spec_at_angle(SynthEyeSpec base, double angle_deg, double half_view_angle);

}  // namespace ocular
