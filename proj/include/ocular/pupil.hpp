#pragma once

#include <vector>

#include "ocular/edges.hpp"
#include "ocular/errors.hpp"
#include "ocular/image.hpp"

namespace ocular {

struct OcularParams {
    double gamma = 2.5;  ///< 2.5 for gray-scale, 1.5 for NIR
    double zone_halfwidth_frac = 0.20;
    double peak_tolerance_frac = 0.01;
    double corner_roi_frac = 0.02;
    double half_view_angle = 60.0;
    int polar_angles = 360;
    double radial_zone_min_frac = 0.05;
    double radial_zone_max_frac = 0.5;
    /// The diameter profile takes the FF over rings r-h..r+h; a single
    /// ring concentric with the pupil is homogeneous and shows no boundary.
    int radial_ring_halfwidth = 1;
    /// Profile excess is measured over the minimum within this many radii.
    int radial_baseline_halfwidth = 2;
    /// Radii whose excess is at least this fraction of the peak excess
    /// form the COM zone.
    double radial_excess_frac = 0.3;
    /// Corner candidates prefer |alpha - 0.5| <= this.
    double corner_alpha_band = 0.1;
    EdgeParams edge;
};

void validate(const OcularParams& params);

using PupilLocation = Point;

struct PupilGeometry {
    PupilLocation center;
    double diameter = 0.0;
};

struct EyeCorners {
    Point left;
    Point right;
    Diagnostics diagnostics;
};

struct RelativePosition {
    double distance = 0.0;  ///< signed, pixels
    double angle = 0.0;     ///< degrees
};

/// FF-weighted centroid of a profile: the zone of +-zone_halfwidth samples
/// around the peak, keeping entries >= (1 - tolerance) * peak.
double profile_centroid(const std::vector<double>& profile, double zone_halfwidth, double tolerance_frac);

/// FF over the annulus of rings r-halfwidth..r+halfwidth, one value per r.
std::vector<double> annulus_ff_profile(const PolarImage& polar, int halfwidth);

PupilLocation pupil_center(const GrayImage& eye, const OcularParams& params = {});
PupilLocation pupil_center_peak(const GrayImage& eye, const OcularParams& params = {});
PupilGeometry pupil_diameter(const GrayImage& eye, PupilLocation center, const OcularParams& params = {});
EyeCorners eye_corners(const GrayImage& eye, const OcularParams& params = {});
RelativePosition relative_position(PupilLocation center, const EyeCorners& corners, double half_view_angle = 60.0);
bool hit_test(PupilLocation found, PupilLocation truth, double r_e);

}  // namespace ocular
