#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "ocular/image.hpp"

namespace ocular {

/// Angular eye position sampled every dt seconds.
struct MotionTrace {
    double dt = 1.0 / 500.0;
    std::vector<double> samples;
};

/// Hold the current position with a sinusoidal micro-oscillation around it.
struct Fixation {
    double duration = 0.0;
    double tremor_amplitude = 0.0;  // degrees
    double tremor_frequency = 0.0;  // Hz
};

/// Minimum-jerk step of `amplitude` degrees completed in `transition` seconds.
struct SaccadeSegment {
    double amplitude = 0.0;
    double transition = 0.02;
};

/// Constant-velocity ramp.
struct Pursuit {
    double slope = 0.0;  // deg/s
    double duration = 0.0;
};

using MotionSegment = std::variant<Fixation, SaccadeSegment, Pursuit>;

struct MotionSpec {
    double start = 0.0;
    std::vector<MotionSegment> segments;
};

/// Saccade onsets must be at least this far apart.
inline constexpr double kSaccadeRefractory = 0.2;

/// Renders `spec` at `fs` Hz. Sample 0 is the start position; each segment
/// appends round(duration * fs) samples. Noise (if any) is added on top.
MotionTrace simulate_eye_motion(const MotionSpec& spec, double fs, const NoiseSpec& noise = {});

/// Minimum-jerk profile 10s^3 - 15s^4 + 6s^5 on [0, 1].
double minimum_jerk(double s);

struct VelocityTrace {
    double dt = 0.0;
    std::vector<double> values;
    int delay = 0;        // samples of causal lag
    int first_valid = 0;  // earlier samples are zero-filled
};

/// Central-difference FIR differentiator (5 or 7 taps), run causally: output
/// k estimates the derivative at sample k - delay.
VelocityTrace fir_velocity(const MotionTrace& trace, int taps);

/// Shifts a causal FIR output back by its delay (tail zero-filled).
std::vector<double> compensate_delay(const VelocityTrace& velocity);

struct SaccadeEvent {
    int onset_index = 0;
    int end_index = 0;
    int peak_index = 0;
    double peak_velocity = 0.0;
    double duration = 0.0;
};

/// Velocity-floor realization of the slope rules: a run of |v| > v_floor
/// marks a saccade, whose boundaries are then walked outward while |v| keeps
/// falling (to where the slope turns zero). Runs of fewer than 2 samples
/// above the floor are dropped.
std::vector<SaccadeEvent> detect_saccades(const std::vector<double>& velocity, double dt,
                                          double v_floor = 30.0);

struct SaccadicRatioResult {
    std::vector<double> ratios;
    double mean = 0.0;
    double stddev = 0.0;  // sample s.d.; 0 for a single event
};

/// Per-event PSV / SCD, in deg/s^2 or rad/s^2. Throws DegenerateInput when
/// there are no events.
SaccadicRatioResult saccadic_ratio(const std::vector<SaccadeEvent>& events, bool radians = false);

}  // namespace ocular
