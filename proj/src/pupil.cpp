#include "ocular/pupil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ocular/form_factor.hpp"

namespace ocular {

void validate(const OcularParams& p) {
    if (!(p.gamma > 0.0)) throw InvalidArgument("gamma must be positive");
    for (double f : {p.zone_halfwidth_frac, p.peak_tolerance_frac, p.corner_roi_frac})
        if (!(f > 0.0 && f < 1.0)) throw InvalidArgument("ocular fractions must be in (0, 1)");
    if (!(p.half_view_angle > 0.0)) throw InvalidArgument("half_view_angle must be positive");
    if (p.polar_angles < 8) throw InvalidArgument("polar_angles must be >= 8");
    if (!(p.radial_zone_min_frac >= 0.0 && p.radial_zone_min_frac < p.radial_zone_max_frac))
        throw InvalidArgument("radial zone fractions must satisfy 0 <= min < max");
    if (p.radial_ring_halfwidth < 0 || p.radial_baseline_halfwidth < 1)
        throw InvalidArgument("radial ring halfwidth must be >= 0 and baseline halfwidth >= 1");
    if (!(p.radial_excess_frac > 0.0 && p.radial_excess_frac <= 1.0))
        throw InvalidArgument("radial_excess_frac must be in (0, 1]");
    validate(p.edge);
}

namespace {

bool is_flat(const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo < 1e-12;
}

}  // namespace

double profile_centroid(const std::vector<double>& profile, double zone_halfwidth, double tolerance_frac) {
    if (profile.empty()) throw InvalidArgument("profile_centroid: empty profile");
    const int n = static_cast<int>(profile.size());
    const double peak = *std::max_element(profile.begin(), profile.end());
    int first = n;
    int last = -1;
    for (int i = 0; i < n; ++i) {
        if (profile[i] == peak) {
            first = std::min(first, i);
            last = i;
        }
    }
    // Twice the zone center; odd means a half-integer center between two
    // equal maxima.
    const int twice_c = first + last;
    const double threshold = (1.0 - tolerance_frac) * peak;
    auto weight = [&](int i) {
        if (i < 0 || i >= n) return 0.0;
        if (std::abs(i - 0.5 * twice_c) > zone_halfwidth) return 0.0;
        return profile[i] >= threshold ? profile[i] : 0.0;
    };
    // Accumulate mirrored pairs so symmetric weights cancel exactly.
    double num = 0.0;
    double den = 0.0;
    const int reach = static_cast<int>(std::ceil(zone_halfwidth)) + 1;
    if (twice_c % 2 == 0) {
        const int c = twice_c / 2;
        den += weight(c);
        for (int k = 1; k <= reach; ++k) {
            const double hi = weight(c + k);
            const double lo = weight(c - k);
            num += k * (hi - lo);
            den += hi + lo;
        }
    } else {
        const int m = twice_c / 2;
        for (int k = 0; k <= reach; ++k) {
            const double hi = weight(m + 1 + k);
            const double lo = weight(m - k);
            num += (k + 0.5) * (hi - lo);
            den += hi + lo;
        }
    }
    return 0.5 * twice_c + num / den;
}

PupilLocation pupil_center(const GrayImage& eye, const OcularParams& params) {
    validate(params);
    if (eye.empty()) throw InvalidArgument("pupil_center: empty image");
    const GrayImage g = gamma_correct(eye, params.gamma);
    const FFProfile hz = horizontal_ff(g);
    const FFProfile vt = vertical_ff(g);
    if (is_flat(hz.values) || is_flat(vt.values)) throw DegenerateInput("no pupil evidence");
    return {profile_centroid(hz.values, params.zone_halfwidth_frac * eye.width(), params.peak_tolerance_frac),
            profile_centroid(vt.values, params.zone_halfwidth_frac * eye.height(), params.peak_tolerance_frac)};
}

PupilLocation pupil_center_peak(const GrayImage& eye, const OcularParams& params) {
    validate(params);
    if (eye.empty()) throw InvalidArgument("pupil_center_peak: empty image");
    const GrayImage g = gamma_correct(eye, params.gamma);
    const FFProfile hz = horizontal_ff(g);
    const FFProfile vt = vertical_ff(g);
    if (is_flat(hz.values) || is_flat(vt.values)) throw DegenerateInput("no pupil evidence");
    const auto ix = std::max_element(hz.values.begin(), hz.values.end()) - hz.values.begin();
    const auto iy = std::max_element(vt.values.begin(), vt.values.end()) - vt.values.begin();
    return {static_cast<double>(ix), static_cast<double>(iy)};
}

std::vector<double> annulus_ff_profile(const PolarImage& polar, int halfwidth) {
    if (halfwidth < 0) throw InvalidArgument("annulus_ff_profile: negative halfwidth");
    std::vector<double> out(polar.radii, 1.0);
    std::vector<double> ring;
    for (int r = 0; r < polar.radii; ++r) {
        ring.clear();
        for (int k = std::max(0, r - halfwidth); k <= std::min(polar.radii - 1, r + halfwidth); ++k)
            for (int a = 0; a < polar.angles; ++a) ring.push_back(polar.at(k, a));
        out[r] = form_factor(ring);
    }
    return out;
}

PupilGeometry pupil_diameter(const GrayImage& eye, PupilLocation center, const OcularParams& params) {
    validate(params);
    if (eye.empty()) throw InvalidArgument("pupil_diameter: empty image");
    const GrayImage g = gamma_correct(eye, params.gamma);
    const double side = std::min(eye.width(), eye.height());
    const int r_max = std::max(1, static_cast<int>(std::floor(params.radial_zone_max_frac * side)));
    const int r_min = std::max(1, static_cast<int>(std::floor(params.radial_zone_min_frac * side)));
    if (r_min >= r_max) throw InvalidArgument("pupil_diameter: image too small for the radial zone");

    const int h = params.radial_ring_halfwidth;
    const int b = params.radial_baseline_halfwidth;
    const PolarImage polar = to_polar(g, center, r_max + h + b + 1, params.polar_angles);
    const std::vector<double> ff = annulus_ff_profile(polar, h);

    // Excess over the local floor: the pupil boundary is a narrow spike,
    // while the eye outline and lids raise the profile over many radii.
    std::vector<double> excess(r_max + 1, 0.0);
    for (int r = r_min; r <= r_max; ++r) {
        double floor = ff[r];
        for (int k = std::max(0, r - b); k <= r + b; ++k) floor = std::min(floor, ff[k]);
        excess[r] = ff[r] - floor;
    }
    const int peak = static_cast<int>(std::max_element(excess.begin() + r_min, excess.end()) - excess.begin());
    if (!(excess[peak] > 1e-12)) throw DegenerateInput("flat radial form factor profile");

    const double threshold = params.radial_excess_frac * excess[peak];
    int lo = peak;
    int hi = peak;
    while (lo > r_min && excess[lo - 1] >= threshold) --lo;
    while (hi < r_max && excess[hi + 1] >= threshold) ++hi;
    double num = 0.0;
    double den = 0.0;
    for (int r = lo; r <= hi; ++r) {
        num += excess[r] * r;
        den += excess[r];
    }
    const double radius = num / den;
    return {center, std::clamp(2.0 * radius, 2.0, side)};
}

namespace {

struct CornerPick {
    bool found = false;
    bool in_band = false;
    int x = 0;
    int y = 0;
    double score = std::numeric_limits<double>::infinity();
};

bool has_edge_neighbour(const EdgeMap& m, int x, int y) {
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            const int xx = x + dx;
            const int yy = y + dy;
            if (xx >= 0 && yy >= 0 && xx < m.width && yy < m.height && m.at(xx, yy)) return true;
        }
    }
    return false;
}

// `outer_sign` is -1 for the left ROI (smaller x is outer) and +1 for the
// right ROI, which keeps tie-breaking mirror symmetric.
CornerPick pick_corner(const EdgeDetection& det, int x0, int x1, int outer_sign, double band) {
    CornerPick best;
    for (int pass = 0; pass < 2 && !best.found; ++pass) {
        for (int y = 0; y < det.edges.height; ++y) {
            for (int x = x0; x < x1; ++x) {
                if (!det.edges.at(x, y)) continue;
                if (pass == 0 && !has_edge_neighbour(det.edges, x, y)) continue;
                const double score = std::abs(det.esi.at(x, y) - 0.5);
                const bool in_band = score <= band;
                bool better = false;
                if (!best.found || in_band != best.in_band) {
                    better = !best.found || in_band;
                } else if (score != best.score) {
                    better = score < best.score;
                } else if (x != best.x) {
                    better = outer_sign * (x - best.x) > 0;
                } else {
                    better = y < best.y;
                }
                if (better) best = {true, in_band, x, y, score};
            }
        }
    }
    return best;
}

}  // namespace

EyeCorners eye_corners(const GrayImage& eye, const OcularParams& params) {
    validate(params);
    if (eye.empty()) throw InvalidArgument("eye_corners: empty image");
    const EdgeDetection det = detect_edges_full(eye, params.edge);
    const int roi = std::min(eye.width(), std::max(3, static_cast<int>(std::ceil(params.corner_roi_frac * eye.width()))));
    const CornerPick left = pick_corner(det, 0, roi, -1, params.corner_alpha_band);
    const CornerPick right = pick_corner(det, eye.width() - roi, eye.width(), +1, params.corner_alpha_band);
    if (!left.found || !right.found) throw DegenerateInput("corner not found");

    EyeCorners corners{{static_cast<double>(left.x), static_cast<double>(left.y)},
                       {static_cast<double>(right.x), static_cast<double>(right.y)},
                       det.diagnostics};
    if (!left.in_band || !right.in_band) corners.diagnostics.push_back("corner ESI outside the target band");
    if (!(corners.left.x < corners.right.x)) throw DegenerateInput("corner not found: regions overlap");
    return corners;
}

RelativePosition relative_position(PupilLocation center, const EyeCorners& corners, double half_view_angle) {
    const double span = distance(corners.left, corners.right);
    if (span == 0.0) throw InvalidArgument("relative_position: coincident corners");
    const Point mid{0.5 * (corners.left.x + corners.right.x), 0.5 * (corners.left.y + corners.right.y)};
    const double ux = (corners.right.x - corners.left.x) / span;
    const double uy = (corners.right.y - corners.left.y) / span;
    const double along = (center.x - mid.x) * ux + (center.y - mid.y) * uy;
    const double d = distance(center, mid);
    const double signed_d = along < 0.0 ? -d : d;
    return {signed_d, signed_d / (0.5 * span) * half_view_angle};
}

bool hit_test(PupilLocation found, PupilLocation truth, double r_e) { return distance(found, truth) <= r_e; }

}  // namespace ocular
