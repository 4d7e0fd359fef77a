#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ocular/errors.hpp"
#include "ocular/image.hpp"
#include "ocular/noise_estimation.hpp"

namespace ocular {

/// Edge Strength Index per pixel: alpha = 1 / F^2 of the local window.
struct ESIMap {
    int width = 0;
    int height = 0;
    int window = 3;
    std::vector<double> values;

    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
};

struct EdgeMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    EdgeMap() = default;
    EdgeMap(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}
    bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v = true) { bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }
    std::size_t count() const;
    bool operator==(const EdgeMap&) const = default;
};

/// How the STVR used for compensation is obtained.
enum class StvrMode {
    Global,    ///< one STVR for the image from `stvr_method`
    Local,     ///< per-window STVR from the local variance and the global noise estimate
    Explicit,  ///< `stvr_value`
    Off,       ///< no compensation
};

struct EdgeParams {
    double alpha_low = 0.5;
    double alpha_high = 0.90;
    int esi_window = 3;
    int nms_window = 5;
    StvrMode stvr_mode = StvrMode::Global;
    NoiseMethod stvr_method = NoiseMethod::M4;
    double stvr_value = 1.0;
    /// When the intensity range is too narrow for any step to reach the ESI
    /// band (strongest_step_alpha > alpha_high), subtract the darkest
    /// box-mean level before computing the ESI.
    bool remove_black_level = true;
    int black_level_window = 5;
};

void validate(const EdgeParams& params);

ESIMap esi_map(const GrayImage& img, int window = 3);

/// alpha_s^-2 = STVR (alpha_g^-2 - 1) + 1, clamped to [1/N, 1].
ESIMap compensate_esi(const ESIMap& esi_g, double stvr);
/// Per-pixel STVR = 1 - sigma_n2 / (local variance), clamped to [0, 1].
ESIMap compensate_esi_local(const ESIMap& esi_g, const GrayImage& img, double sigma_n2);

/// Non-minimum suppression. The orientation (0, 45, 90, 135 degrees) along
/// which alpha varies least is taken as the edge direction; a pixel survives
/// only if it holds the smallest alpha among edge responses (alpha >=
/// response_floor) on the perpendicular line through the window. Ties keep
/// the first pixel in row-major order. Suppressed pixels become 1.
ESIMap nms_min(const ESIMap& esi, int window = 5, double response_floor = 0.5);

EdgeMap threshold_edges(const ESIMap& esi, const EdgeParams& params = {});

/// Minimum over all fully-contained window x window box means.
double black_level(const GrayImage& img, int window = 5);

/// Lowest alpha an ideal step with bright/dark ratio `ratio` can produce in
/// a window x window ESI window (one bright column against dark ones).
double strongest_step_alpha(double ratio, int window = 3);

struct EdgeDetection {
    EdgeMap edges;
    ESIMap esi;         ///< compensated, before suppression
    ESIMap suppressed;  ///< after suppression
    double stvr = 1.0;
    double black_level = 0.0;
    Diagnostics diagnostics;
};

EdgeDetection detect_edges_full(const GrayImage& img, const EdgeParams& params = {});
EdgeMap detect_edges(const GrayImage& img, const EdgeParams& params = {});

/// Exact Euclidean distance from every pixel to the nearest set pixel.
/// Pixels get +infinity when the map is empty.
std::vector<double> distance_transform(const EdgeMap& map);

/// Baddeley error metric with w(t) = min(t, c), divided by c so the default
/// cap sqrt(K^2 + L^2) bounds it to [0, 1]. c <= 0 selects the default.
double baddeley_metric(const EdgeMap& test, const EdgeMap& ref, double p = 2.0, double c = 0.0);

/// alpha of a Gaussian region with entropy H (nats) and mean mu.
double esi_from_entropy(double entropy, double mu);

/// Pixels of a piecewise-constant image that are brighter than at least one
/// 4-neighbour: the bright side of every discontinuity.
EdgeMap boundary_ground_truth(const GrayImage& img);

/// PGM convention for edge maps: 0 = edge, 255 = non-edge.
GrayImage edge_map_to_image(const EdgeMap& map);
EdgeMap edge_map_from_image(const GrayImage& img);

}  // namespace ocular
