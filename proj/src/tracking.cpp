#include "ocular/tracking.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "ocular/errors.hpp"
#include "ocular/pgm.hpp"

namespace ocular {

const char* filter_name(FilterKind kind) { return kind == FilterKind::KF ? "kf" : "ekf"; }

FilterKind parse_filter(const std::string& text) {
    if (text == "kf") return FilterKind::KF;
    if (text == "ekf") return FilterKind::EKF;
    throw InvalidArgument("unknown tracker '" + text + "' (expected kf or ekf)");
}

void validate(const TrackerConfig& config) {
    if (!(config.R > 0.0)) throw InvalidArgument("tracker: R must be positive");
    if (!config.Q.allFinite() || (config.Q - config.Q.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw InvalidArgument("tracker: Q must be finite and symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(config.Q);
    if (eig.eigenvalues().minCoeff() < -1e-12) throw InvalidArgument("tracker: Q must be positive semi-definite");
    if (!(config.v_floor >= 0.0)) throw InvalidArgument("tracker: v_floor must be non-negative");
}

TrackerState initial_state(const TrackerConfig& config, std::optional<double> z0) {
    TrackerState s;
    s.Q = config.Q;
    s.R = config.R;
    s.u = config.paper_model ? 1.0 : config.u;
    s.P = Eigen::Matrix2d::Identity();
    s.x = Eigen::Vector2d::Zero();
    if (!config.paper_model && config.measurement_seeded && z0) s.x(0) = *z0;
    return s;
}

namespace {

TrackerState step(const TrackerState& s, std::optional<double> z, double dt, FilterKind kind) {
    static const LinearMotionModel linear;
    if (!z) return predict_step(s, dt, linear);
    return kind == FilterKind::KF ? kf_step(s, *z, dt) : ekf_step(s, *z, dt, linear);
}

std::optional<double> first_measurement(const std::vector<std::optional<double>>& z) {
    for (const auto& v : z)
        if (v) return v;
    return std::nullopt;
}

}  // namespace

std::vector<TrackerState> run_filter(const std::vector<double>& z, double dt, const TrackerConfig& config) {
    validate(config);
    std::vector<TrackerState> out;
    out.reserve(z.size());
    if (z.empty()) return out;
    TrackerState s = initial_state(config, z.front());
    for (double v : z) {
        s = step(s, v, dt, config.filter);
        out.push_back(s);
    }
    return out;
}

TrackResult track_measurements(const std::vector<std::optional<double>>& z, double dt,
                               const TrackerConfig& config) {
    validate(config);
    if (!(dt > 0.0)) throw InvalidArgument("track: dt must be positive");
    TrackResult result;
    result.measurements.dt = dt;
    const auto z0 = first_measurement(z);
    if (!z0 && !z.empty()) throw DegenerateInput("track: no frame produced a measurement");

    TrackerState s = initial_state(config, z0);
    std::size_t skipped = 0;
    for (const auto& v : z) {
        result.measurements.samples.push_back(v ? *v : std::numeric_limits<double>::quiet_NaN());
        if (!v) ++skipped;
        s = step(s, v, dt, config.filter);
        result.position.push_back(s.x(0));
        result.velocity.push_back(s.x(1));
    }
    if (skipped > 0)
        result.diagnostics.push_back(std::to_string(skipped) + " frame(s) without a measurement, prediction only");

    result.events = detect_saccades(result.velocity, dt, config.v_floor);
    if (!result.events.empty()) result.sr = saccadic_ratio(result.events, config.sr_radians);
    else result.diagnostics.push_back("no saccades detected");
    return result;
}

std::optional<double> measure_angle(const GrayImage& frame, const OcularParams& params, Diagnostics& diag) {
    try {
        const PupilLocation c = pupil_center(frame, params);
        const EyeCorners corners = eye_corners(frame, params);
        if (!corners.diagnostics.empty()) diag.insert(diag.end(), corners.diagnostics.begin(), corners.diagnostics.end());
        return relative_position(c, corners, params.half_view_angle).angle;
    } catch (const Error& e) {
        diag.push_back(std::string("measurement skipped: ") + e.what());
        return std::nullopt;
    }
}

TrackResult track_frames(const std::vector<GrayImage>& frames, double fps, const OcularParams& params,
                         const TrackerConfig& config) {
    if (!(fps > 0.0)) throw InvalidArgument("track: fps must be positive");
    validate(params);
    // Per-frame messages repeat on every frame of a sequence; report each
    // once with a count and the first frame that raised it.
    std::vector<std::string> order;
    std::map<std::string, std::pair<std::size_t, std::size_t>> seen;  // first frame, count
    std::vector<std::optional<double>> z;
    z.reserve(frames.size());
    for (std::size_t k = 0; k < frames.size(); ++k) {
        Diagnostics d;
        z.push_back(measure_angle(frames[k], params, d));
        for (auto& msg : d) {
            auto [it, fresh] = seen.try_emplace(msg, k, 0);
            if (fresh) order.push_back(msg);
            ++it->second.second;
        }
    }
    Diagnostics frame_diag;
    for (const auto& msg : order) {
        const auto [first, count] = seen[msg];
        frame_diag.push_back(msg + " (" + std::to_string(count) + " frame(s), first " + std::to_string(first) + ")");
    }
    TrackResult result = track_measurements(z, 1.0 / fps, config);
    result.diagnostics.insert(result.diagnostics.begin(), frame_diag.begin(), frame_diag.end());
    return result;
}

TrackResult track_sequence(const std::filesystem::path& dir, double fps, const OcularParams& params,
                           const TrackerConfig& config) {
    std::vector<GrayImage> frames;
    for (const auto& path : list_frames(dir)) frames.push_back(load_pgm(path));
    if (frames.empty()) throw InputError("track: no frames in " + dir.string());
    return track_frames(frames, fps, params, config);
}

std::vector<GrayImage> render_eye_sequence(const MotionTrace& trace, const SynthEyeSpec& base,
                                           double half_view_angle, const NoiseSpec& noise) {
    std::vector<GrayImage> frames;
    frames.reserve(trace.samples.size());
    for (std::size_t k = 0; k < trace.samples.size(); ++k) {
        GrayImage img = synth_eye(eye_spec_at_angle(base, trace.samples[k], half_view_angle)).image;
        if (noise.variance > 0.0) img = add_noise(img, NoiseSpec{noise.variance, noise.seed + k});
        frames.push_back(std::move(img));
    }
    return frames;
}

}  // namespace ocular
