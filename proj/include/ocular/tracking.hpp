#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "ocular/kalman.hpp"
#include "ocular/pupil.hpp"
#include "ocular/saccade.hpp"
#include "ocular/synth.hpp"

namespace ocular {

enum class FilterKind { KF, EKF };

const char* filter_name(FilterKind kind);
FilterKind parse_filter(const std::string& text);

struct TrackerConfig {
    FilterKind filter = FilterKind::EKF;
    Eigen::Matrix2d Q = Eigen::Vector2d(1e-4, 1e-2).asDiagonal();
    double R = 0.25;
    double u = 0.0;
    /// Thesis model: u = 1 and a zero initial state.
    bool paper_model = false;
    /// Seed the position with the first measurement; otherwise start at 0.
    bool measurement_seeded = true;
    double v_floor = 30.0;
    bool sr_radians = false;
};

void validate(const TrackerConfig& config);

/// Initial state for a stream whose first measurement is `z0`.
TrackerState initial_state(const TrackerConfig& config, std::optional<double> z0);

struct TrackResult {
    MotionTrace measurements;   ///< z(k); NaN where the frame gave no measurement
    std::vector<double> position;
    std::vector<double> velocity;
    std::vector<SaccadeEvent> events;
    std::optional<SaccadicRatioResult> sr;
    Diagnostics diagnostics;
};

/// Runs the chosen filter over a measurement stream. Missing samples get a
/// prediction-only step.
TrackResult track_measurements(const std::vector<std::optional<double>>& z, double dt,
                               const TrackerConfig& config);

/// Filter-only pass, returning the state after every sample.
std::vector<TrackerState> run_filter(const std::vector<double>& z, double dt, const TrackerConfig& config);

/// Relative angle of the pupil per frame, or nullopt if center or corners fail.
std::optional<double> measure_angle(const GrayImage& frame, const OcularParams& params, Diagnostics& diag);

TrackResult track_frames(const std::vector<GrayImage>& frames, double fps, const OcularParams& params,
                         const TrackerConfig& config);

/// Loads frame_*.pgm (sorted) from `dir` and tracks them.
TrackResult track_sequence(const std::filesystem::path& dir, double fps, const OcularParams& params,
                           const TrackerConfig& config);

/// One synthetic eye per trace sample, pupil placed at the sample's angle.
std::vector<GrayImage> render_eye_sequence(const MotionTrace& trace, const SynthEyeSpec& base,
                                           double half_view_angle, const NoiseSpec& noise = {});

}  // namespace ocular
