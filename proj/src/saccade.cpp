#include "ocular/saccade.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "ocular/errors.hpp"

namespace ocular {

double minimum_jerk(double s) {
    s = std::clamp(s, 0.0, 1.0);
    return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

namespace {

std::size_t segment_samples(double duration, double fs, const char* what) {
    if (!(duration >= 0.0) || !std::isfinite(duration))
        throw InvalidArgument(std::string("simulate_eye_motion: bad ") + what + " duration");
    return static_cast<std::size_t>(std::llround(duration * fs));
}

}  // namespace

MotionTrace simulate_eye_motion(const MotionSpec& spec, double fs, const NoiseSpec& noise) {
    if (!(fs >= 60.0)) throw InvalidArgument("simulate_eye_motion: fs must be at least 60 Hz");
    if (!(noise.variance >= 0.0)) throw InvalidArgument("simulate_eye_motion: negative noise variance");
    const double dt = 1.0 / fs;

    MotionTrace trace;
    trace.dt = dt;
    trace.samples.push_back(spec.start);
    double pos = spec.start;
    std::optional<double> last_onset;

    for (const auto& segment : spec.segments) {
        const double t0 = static_cast<double>(trace.samples.size() - 1) * dt;
        if (const auto* f = std::get_if<Fixation>(&segment)) {
            const std::size_t n = segment_samples(f->duration, fs, "fixation");
            for (std::size_t j = 1; j <= n; ++j) {
                const double t = static_cast<double>(j) * dt;
                trace.samples.push_back(
                    pos + f->tremor_amplitude * std::sin(2.0 * std::numbers::pi * f->tremor_frequency * t));
            }
        } else if (const auto* s = std::get_if<SaccadeSegment>(&segment)) {
            if (last_onset && t0 - *last_onset < kSaccadeRefractory - 1e-9)
                throw InvalidArgument("simulate_eye_motion: saccades closer than the 200 ms refractory period");
            last_onset = t0;
            const std::size_t n = std::max<std::size_t>(1, segment_samples(s->transition, fs, "saccade"));
            for (std::size_t j = 1; j <= n; ++j)
                trace.samples.push_back(pos + s->amplitude *
                                                  minimum_jerk(static_cast<double>(j) / static_cast<double>(n)));
            pos += s->amplitude;
        } else {
            const auto& p = std::get<Pursuit>(segment);
            const std::size_t n = segment_samples(p.duration, fs, "pursuit");
            for (std::size_t j = 1; j <= n; ++j) trace.samples.push_back(pos + p.slope * static_cast<double>(j) * dt);
            pos += p.slope * static_cast<double>(n) * dt;
        }
    }

    if (noise.variance > 0.0) {
        std::mt19937_64 rng(noise.seed);
        std::normal_distribution<double> gauss(0.0, std::sqrt(noise.variance));
        for (double& v : trace.samples) v += gauss(rng);
    }
    return trace;
}

VelocityTrace fir_velocity(const MotionTrace& trace, int taps) {
    if (!(trace.dt > 0.0)) throw InvalidArgument("fir_velocity: dt must be positive");
    // Coefficients for f(+1), f(+2), ...; the negative side is antisymmetric.
    std::vector<double> c;
    double denom = 0.0;
    if (taps == 5) {
        c = {8.0, -1.0};
        denom = 12.0;
    } else if (taps == 7) {
        c = {45.0, -9.0, 1.0};
        denom = 60.0;
    } else {
        throw InvalidArgument("fir_velocity: taps must be 5 or 7");
    }
    const int half = (taps - 1) / 2;
    const auto& x = trace.samples;
    const int n = static_cast<int>(x.size());

    VelocityTrace out;
    out.dt = trace.dt;
    out.delay = half;
    out.first_valid = std::min(n, taps - 1);
    out.values.assign(x.size(), 0.0);
    for (int k = taps - 1; k < n; ++k) {
        const int centre = k - half;
        double acc = 0.0;
        for (int m = 1; m <= half; ++m) acc += c[m - 1] * (x[centre + m] - x[centre - m]);
        out.values[k] = acc / (denom * trace.dt);
    }
    return out;
}

std::vector<double> compensate_delay(const VelocityTrace& velocity) {
    std::vector<double> out(velocity.values.size(), 0.0);
    for (std::size_t k = 0; k + velocity.delay < velocity.values.size(); ++k)
        out[k] = velocity.values[k + velocity.delay];
    return out;
}

std::vector<SaccadeEvent> detect_saccades(const std::vector<double>& velocity, double dt, double v_floor) {
    if (!(dt > 0.0)) throw InvalidArgument("detect_saccades: dt must be positive");
    if (!(v_floor >= 0.0)) throw InvalidArgument("detect_saccades: v_floor must be non-negative");
    const int n = static_cast<int>(velocity.size());
    auto mag = [&](int i) { return std::abs(velocity[i]); };

    std::vector<SaccadeEvent> events;
    int previous_end = 0;
    int i = 0;
    while (i < n) {
        if (!(mag(i) > v_floor)) {
            ++i;
            continue;
        }
        const int run_start = i;
        while (i < n && mag(i) > v_floor) ++i;
        const int run_end = i - 1;
        if (run_end - run_start + 1 < 2) continue;

        int onset = run_start;
        while (onset > previous_end && mag(onset - 1) < mag(onset)) --onset;
        int end = run_end;
        while (end + 1 < n && mag(end + 1) < mag(end)) ++end;
        if (end <= onset) continue;

        SaccadeEvent e;
        e.onset_index = onset;
        e.end_index = end;
        e.peak_index = onset;
        for (int k = onset; k <= end; ++k)
            if (mag(k) > mag(e.peak_index)) e.peak_index = k;
        e.peak_velocity = mag(e.peak_index);
        e.duration = static_cast<double>(end - onset) * dt;
        events.push_back(e);
        previous_end = end;
        i = std::max(i, end + 1);
    }
    return events;
}

SaccadicRatioResult saccadic_ratio(const std::vector<SaccadeEvent>& events, bool radians) {
    if (events.empty()) throw DegenerateInput("saccadic_ratio: no saccades");
    const double scale = radians ? std::numbers::pi / 180.0 : 1.0;
    SaccadicRatioResult r;
    for (const auto& e : events) {
        if (!(e.duration > 0.0)) throw InvalidArgument("saccadic_ratio: event with non-positive duration");
        r.ratios.push_back(scale * e.peak_velocity / e.duration);
    }
    double sum = 0.0;
    for (double v : r.ratios) sum += v;
    r.mean = sum / static_cast<double>(r.ratios.size());
    if (r.ratios.size() > 1) {
        double ss = 0.0;
        for (double v : r.ratios) ss += (v - r.mean) * (v - r.mean);
        r.stddev = std::sqrt(ss / static_cast<double>(r.ratios.size() - 1));
    }
    return r;
}

}  // namespace ocular
