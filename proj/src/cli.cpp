#include "ocular/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include "ocular/decorrelation.hpp"
#include "ocular/edges.hpp"
#include "ocular/eye_state.hpp"
#include "ocular/filter_bank_io.hpp"
#include "ocular/form_factor.hpp"
#include "ocular/noise_estimation.hpp"
#include "ocular/perclos.hpp"
#include "ocular/pgm.hpp"
#include "ocular/pupil.hpp"
#include "ocular/saccade.hpp"
#include "ocular/synth.hpp"
#include "ocular/tracking.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ocular::cli {

namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// JSON has no infinities; they are written as null.
json jnum(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// Output sink: a file when a path is given, the command's stdout otherwise.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) {
        if (path.empty()) {
            os_ = &fallback;
        } else {
            file_.open(path, std::ios::binary);
            if (!file_) throw InputError("cannot write " + path);
            os_ = &file_;
        }
    }
    std::ostream& operator*() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_ = nullptr;
};

struct Globals {
    bool strict = false;
    std::optional<unsigned long long> seed;
    bool dump_config = false;

    unsigned long long seed_or_default() const { return seed.value_or(0); }
    void require_seed(const char* what) const {
        if (strict && !seed) throw InvalidArgument(std::string(what) + " is randomized; --strict requires --seed");
    }
};

struct EdgeFlags {
    EdgeParams p;
    std::string stvr_mode = "global";
    std::string stvr_method = "M4";
    bool keep_black_level = false;

    void add(CLI::App* app) {
        app->add_option("--alpha-low", p.alpha_low, "lower ESI edge bound");
        app->add_option("--alpha-high", p.alpha_high, "upper ESI edge bound");
        app->add_option("--esi-window", p.esi_window, "ESI window side (odd)");
        app->add_option("--nms", p.nms_window, "non-maximum suppression window side (odd)");
        app->add_option("--stvr-mode", stvr_mode, "global | local | explicit | off")
            ->check(CLI::IsMember({"global", "local", "explicit", "off"}));
        app->add_option("--stvr-method", stvr_method, "noise estimator feeding the STVR");
        app->add_option("--stvr-value", p.stvr_value, "STVR for --stvr-mode explicit");
        app->add_flag("--keep-black-level", keep_black_level, "never subtract the black level");
        app->add_option("--black-level-window", p.black_level_window, "box side for the black-level estimate");
    }
    EdgeParams resolve() {
        if (stvr_mode == "global") p.stvr_mode = StvrMode::Global;
        else if (stvr_mode == "local") p.stvr_mode = StvrMode::Local;
        else if (stvr_mode == "explicit") p.stvr_mode = StvrMode::Explicit;
        else p.stvr_mode = StvrMode::Off;
        p.stvr_method = parse_method(stvr_method);
        p.remove_black_level = !keep_black_level;
        validate(p);
        return p;
    }
};

struct OcularFlags {
    OcularParams p;
    EdgeFlags edge;

    void add(CLI::App* app) {
        app->add_option("--gamma", p.gamma, "gamma correction exponent (2.5 gray, 1.5 NIR)");
        app->add_option("--zone", p.zone_halfwidth_frac, "centroid zone half-width as a fraction of the side");
        app->add_option("--tolerance", p.peak_tolerance_frac, "profile peak tolerance fraction");
        app->add_option("--corner-roi", p.corner_roi_frac, "corner search width as a fraction of the width");
        app->add_option("--half-view", p.half_view_angle, "half view angle spanned by the corners, degrees");
        app->add_option("--angles", p.polar_angles, "polar angle samples");
        app->add_option("--radial-min", p.radial_zone_min_frac, "radial search start, fraction of the short side");
        app->add_option("--radial-max", p.radial_zone_max_frac, "radial search end, fraction of the short side");
        app->add_option("--ring-halfwidth", p.radial_ring_halfwidth, "rings on each side in the diameter annulus");
        app->add_option("--baseline-halfwidth", p.radial_baseline_halfwidth, "radii searched for the profile floor");
        app->add_option("--excess-frac", p.radial_excess_frac, "COM zone threshold on the profile excess");
        app->add_option("--corner-band", p.corner_alpha_band, "preferred |ESI - 0.5| for corners");
        edge.add(app);
    }
    OcularParams resolve() {
        p.edge = edge.resolve();
        validate(p);
        return p;
    }
};

struct TrackerFlags {
    TrackerConfig c;
    std::string tracker = "ekf";
    double q_pos = 1e-4;
    double q_vel = 1e-2;
    double sigma_a = 0.0;
    bool zero_init = false;

    void add(CLI::App* app) {
        app->add_option("--tracker", tracker, "kf | ekf")->check(CLI::IsMember({"kf", "ekf"}));
        app->add_option("--q-pos", q_pos, "process noise on position, deg^2");
        app->add_option("--q-vel", q_vel, "process noise on velocity, (deg/s)^2");
        app->add_option("--sigma-a", sigma_a,
                        "white-acceleration process noise, deg/s^2; overrides --q-pos/--q-vel when > 0");
        app->add_option("--r", c.R, "measurement noise variance, deg^2");
        app->add_option("--u", c.u, "constant acceleration input");
        app->add_flag("--paper-model", c.paper_model, "u = 1 and a zero initial state");
        app->add_flag("--zero-init", zero_init, "start from position 0 instead of the first measurement");
        app->add_option("--v-floor", c.v_floor, "saccade velocity floor, deg/s");
        app->add_flag("--radians", c.sr_radians, "report the saccadic ratio in rad/s^2");
    }
    TrackerConfig resolve(double dt) {
        c.filter = parse_filter(tracker);
        c.measurement_seeded = !zero_init;
        if (sigma_a > 0.0) c.Q = white_acceleration_q(dt, sigma_a);
        else c.Q = Eigen::Vector2d(q_pos, q_vel).asDiagonal();
        validate(c);
        return c;
    }
};

bool is_dir(const std::string& p) { return fs::is_directory(p); }

std::vector<fs::path> frames_in(const std::string& dir) {
    auto frames = list_frames(dir);
    if (frames.empty()) throw InputError("no frame_*.pgm files in " + dir);
    return frames;
}

void report(const Diagnostics& diag, std::ostream& err) {
    for (const auto& d : diag) err << "warning: " << d << '\n';
}

// Diagnostics are warnings, except under --strict where they set exit 3.
int finish(const Diagnostics& diag, const Globals& g, std::ostream& err) {
    report(diag, err);
    return g.strict && !diag.empty() ? kDegenerate : kOk;
}

json point_json(const Point& p) { return {{"x", p.x}, {"y", p.y}}; }

// ---------------------------------------------------------------- default bank

// Bank trained on generated eyes of the frame size, used when no --bank is
// given. Coverage bands sit around 0.2, 0.7 and 1.0 of the iris.
FilterBank default_bank(int width, int height, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    TrainingSet train;
    const std::pair<EyeState, std::pair<double, double>> bands[] = {
        {EyeState::Open, {0.15, 0.25}}, {EyeState::PartiallyClosed, {0.65, 0.75}}, {EyeState::Closed, {0.9, 1.0}}};
    for (const auto& [state, band] : bands) {
        std::uniform_real_distribution<double> cov(band.first, band.second);
        std::vector<GrayImage> images;
        for (int i = 0; i < 20; ++i) {
            SynthEyeSpec spec;
            spec.width = width;
            spec.height = height;
            spec.pupil_center = {width / 2.0, height / 2.0};
            spec.pupil_radius = 0.16 * height;
            spec.iris_radius = 0.34 * height;
            spec.lid_coverage = cov(rng);
            spec.supersample = 3;
            GrayImage img = synth_eye(spec).image;
            img = add_noise(img, NoiseSpec{variance(img.pixels()) / 100.0, rng()});
            images.push_back(std::move(img));
        }
        train.emplace_back(state, std::move(images));
    }
    return synthesize_otmach(train);
}

FilterBank bank_for(const std::string& path, const GrayImage& first, const Globals& g, Diagnostics& diag) {
    if (!path.empty()) return load_filter_bank(path);
    diag.push_back("no --bank given; using a filter bank trained on generated eyes");
    return default_bank(first.width(), first.height(), g.seed_or_default());
}

// ---------------------------------------------------------------- motion spec

MotionSpec parse_motion_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
    MotionSpec spec;
    try {
        spec.start = j.value("start", 0.0);
        for (const auto& s : j.at("segments")) {
            const std::string type = s.at("type");
            if (type == "fixation") {
                spec.segments.push_back(Fixation{s.at("duration").get<double>(), s.value("tremor_amplitude", 0.0),
                                                 s.value("tremor_frequency", 0.0)});
            } else if (type == "saccade") {
                spec.segments.push_back(SaccadeSegment{s.at("amplitude").get<double>(), s.value("transition", 0.02)});
            } else if (type == "pursuit") {
                spec.segments.push_back(Pursuit{s.at("slope").get<double>(), s.at("duration").get<double>()});
            } else {
                throw InputError(path + ": unknown segment type '" + type + "'");
            }
        }
    } catch (const json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
    return spec;
}

MotionTrace read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::string line;
    std::getline(in, line);  // header k,t,position
    MotionTrace trace;
    std::vector<double> times;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string k, t, p;
        if (!std::getline(ss, k, ',') || !std::getline(ss, t, ',') || !std::getline(ss, p, ','))
            throw InputError(path + ": expected k,t,position rows");
        try {
            times.push_back(std::stod(t));
            trace.samples.push_back(std::stod(p));
        } catch (const std::exception&) {
            throw InputError(path + ": malformed number in '" + line + "'");
        }
    }
    if (trace.samples.empty()) throw InputError(path + ": empty trace");
    if (times.size() > 1) trace.dt = times[1] - times[0];
    return trace;
}

// ---------------------------------------------------------------- commands

struct FfCmd {
    std::string image;
    std::string mode = "horizontal";
    int window = 3;
    double gamma = 0.0;
    double center_x = kUnset;
    double center_y = kUnset;
    int radii = 0;
    int angles = 360;
    std::string out;

    void add(CLI::App* app) {
        app->add_option("image", image, "input PGM")->required();
        app->add_option("--mode", mode, "global | horizontal | vertical | radial | local")
            ->check(CLI::IsMember({"global", "horizontal", "vertical", "radial", "local"}));
        app->add_option("--window", window, "local window side (odd)");
        app->add_option("--gamma", gamma, "gamma correction first; 0 leaves the image as is");
        app->add_option("--center-x", center_x, "radial origin x; default: pupil center");
        app->add_option("--center-y", center_y, "radial origin y; default: pupil center");
        app->add_option("--radii", radii, "radial samples; 0 = half the short side");
        app->add_option("--angles", angles, "angular samples");
        app->add_option("--out", out, "CSV path (or .pgm for a scaled local map); default stdout");
    }
    int run(const Globals& g, std::ostream& out_stream, std::ostream& err) {
        GrayImage img = load_pgm(image);
        if (gamma > 0.0) img = gamma_correct(img, gamma);
        if (mode == "global") {
            Sink s(out, out_stream);
            *s << num(form_factor(img.pixels())) << '\n';
            return kOk;
        }
        if (mode == "local") {
            const FFMap m = local_ff(img, window);
            if (fs::path(out).extension() == ".pgm") {
                // FF spans [1, window]; scale onto 0..255.
                GrayImage scaled(m.width, m.height);
                for (std::size_t i = 0; i < m.values.size(); ++i)
                    scaled.pixels()[i] = std::clamp(255.0 * (m.values[i] - 1.0) / (window - 1.0), 0.0, 255.0);
                save_pgm(scaled, out);
                return kOk;
            }
            Sink s(out, out_stream);
            *s << "x,y,value\n";
            for (int y = 0; y < m.height; ++y)
                for (int x = 0; x < m.width; ++x) *s << x << ',' << y << ',' << num(m.at(x, y)) << '\n';
            return kOk;
        }
        FFProfile prof;
        if (mode == "horizontal") {
            prof = horizontal_ff(img);
        } else if (mode == "vertical") {
            prof = vertical_ff(img);
        } else {
            Point c{center_x, center_y};
            if (std::isnan(center_x) || std::isnan(center_y)) c = pupil_center(load_pgm(image));
            const int r = radii > 0 ? radii : std::max(1, std::min(img.width(), img.height()) / 2);
            prof = radial_ff(to_polar(img, c, r, angles));
        }
        Sink s(out, out_stream);
        *s << "index,value\n";
        for (std::size_t i = 0; i < prof.values.size(); ++i) *s << i << ',' << num(prof.values[i]) << '\n';
        return finish({}, g, err);
    }
};

struct NoiseCmd {
    std::string image;
    std::string method = "M4";
    EstimatorConfig cfg;
    std::string direction = "horizontal";

    void add(CLI::App* app) {
        app->add_option("image", image, "input PGM")->required();
        app->add_option("--method", method, "M1 | M2 | weighted | M3 | M4 | M5")
            ->check(CLI::IsMember({"M1", "M2", "weighted", "M3", "M4", "M5"}));
        app->add_option("--region", cfg.region_size, "tile side for the local-variance methods");
        app->add_option("--c-alpha", cfg.c_alpha, "weighting constant for the weighted method");
        app->add_option("--acs-direction", direction, "horizontal | vertical")
            ->check(CLI::IsMember({"horizontal", "vertical"}));
        app->add_option("--subspace-dim", cfg.subspace_dim, "snapshot length for the subspace method");
    }
    int run(const Globals& g, std::ostream& out, std::ostream& err) {
        cfg.acs_direction = direction == "vertical" ? AcsDirection::Vertical : AcsDirection::Horizontal;
        const VarianceEstimate est = estimate_variance(load_pgm(image), parse_method(method), cfg);
        const NoiseRatio snr = estimate_snr(est);
        const NoiseRatio stvr = estimate_stvr(est);
        Diagnostics diag = est.diagnostics;
        diag.insert(diag.end(), snr.diagnostics.begin(), snr.diagnostics.end());
        diag.insert(diag.end(), stvr.diagnostics.begin(), stvr.diagnostics.end());
        json j{{"method", method_name(est.method)},
               {"sigma_s2", jnum(est.sigma_s2)},
               {"sigma_n2", jnum(est.sigma_n2)},
               {"sigma_g2", jnum(est.sigma_g2)},
               {"snr", jnum(snr.value)},
               {"stvr", jnum(stvr.value)},
               {"diagnostics", diag}};
        out << j.dump(2) << '\n';
        return finish(diag, g, err);
    }
};

struct EdgesCmd {
    std::string image;
    std::string out;
    EdgeFlags edge;

    void add(CLI::App* app) {
        app->add_option("image", image, "input PGM")->required();
        app->add_option("--out", out, "edge map PGM (0 = edge, 255 = non-edge)")->required();
        edge.add(app);
    }
    int run(const Globals& g, std::ostream&, std::ostream& err) {
        const EdgeDetection det = detect_edges_full(load_pgm(image), edge.resolve());
        save_pgm(edge_map_to_image(det.edges), out);
        return finish(det.diagnostics, g, err);
    }
};

struct BemCmd {
    std::string map;
    std::string ref;
    double p = 2.0;
    double c = 0.0;

    void add(CLI::App* app) {
        app->add_option("map", map, "detected edge map PGM")->required();
        app->add_option("--ref", ref, "reference edge map PGM")->required();
        app->add_option("--p", p, "metric exponent");
        app->add_option("--c", c, "distance cap; <= 0 uses the image diagonal");
    }
    int run(const Globals&, std::ostream& out, std::ostream&) {
        out << num(baddeley_metric(edge_map_from_image(load_pgm(map)), edge_map_from_image(load_pgm(ref)), p, c))
            << '\n';
        return kOk;
    }
};

struct PupilCmd {
    std::string input;
    bool peak = false;
    bool no_diameter = false;
    std::string out;
    OcularFlags ocular;

    void add(CLI::App* app) {
        app->add_option("input", input, "frame PGM or frame directory")->required();
        app->add_flag("--peak", peak, "use the profile peak instead of the FF-weighted centroid");
        app->add_flag("--no-diameter", no_diameter, "skip the diameter measurement");
        app->add_option("--out", out, "output path; default stdout");
        ocular.add(app);
    }
    PupilLocation locate(const GrayImage& img, const OcularParams& p) const {
        return peak ? pupil_center_peak(img, p) : pupil_center(img, p);
    }
    int run(const Globals& g, std::ostream& out_stream, std::ostream& err) {
        const OcularParams p = ocular.resolve();
        Diagnostics diag;
        Sink s(out, out_stream);
        if (!is_dir(input)) {
            const GrayImage img = load_pgm(input);
            const PupilLocation c = locate(img, p);
            json j = point_json(c);
            if (!no_diameter) {
                try {
                    j["diameter"] = pupil_diameter(img, c, p).diameter;
                } catch (const DegenerateInput& e) {
                    diag.push_back(std::string("diameter: ") + e.what());
                }
            }
            *s << j.dump(2) << '\n';
            return finish(diag, g, err);
        }
        *s << "frame,x,y,angle\n";
        int k = 0;
        for (const auto& path : frames_in(input)) {
            const GrayImage img = load_pgm(path);
            std::string x, y, angle;
            try {
                const PupilLocation c = locate(img, p);
                x = num(c.x);
                y = num(c.y);
                const EyeCorners corners = eye_corners(img, p);
                angle = num(relative_position(c, corners, p.half_view_angle).angle);
            } catch (const DegenerateInput& e) {
                diag.push_back(path.filename().string() + ": " + e.what());
            }
            *s << k++ << ',' << x << ',' << y << ',' << angle << '\n';
        }
        return finish(diag, g, err);
    }
};

struct CornersCmd {
    std::string input;
    std::string out;
    OcularFlags ocular;

    void add(CLI::App* app) {
        app->add_option("input", input, "frame PGM or frame directory")->required();
        app->add_option("--out", out, "output path; default stdout");
        ocular.add(app);
    }
    int run(const Globals& g, std::ostream& out_stream, std::ostream& err) {
        const OcularParams p = ocular.resolve();
        Diagnostics diag;
        Sink s(out, out_stream);
        if (!is_dir(input)) {
            const EyeCorners c = eye_corners(load_pgm(input), p);
            *s << json{{"left", point_json(c.left)}, {"right", point_json(c.right)}}.dump(2) << '\n';
            return finish(c.diagnostics, g, err);
        }
        *s << "frame,left_x,left_y,right_x,right_y\n";
        int k = 0;
        for (const auto& path : frames_in(input)) {
            std::string row = ",,,";
            try {
                const EyeCorners c = eye_corners(load_pgm(path), p);
                row = num(c.left.x) + ',' + num(c.left.y) + ',' + num(c.right.x) + ',' + num(c.right.y);
            } catch (const DegenerateInput& e) {
                diag.push_back(path.filename().string() + ": " + e.what());
            }
            *s << k++ << ',' << row << '\n';
        }
        return finish(diag, g, err);
    }
};

struct TrainCmd {
    std::vector<std::string> classes;
    std::string domain = "dct";
    OtMachParams params;
    std::string out;

    void add(CLI::App* app) {
        app->add_option("--class", classes, "state=dir, state in open | partial | closed (repeatable)")
            ->required();
        app->add_option("--domain", domain, "dct | dft")->check(CLI::IsMember({"dct", "dft"}));
        app->add_option("--a", params.a, "ONV weight");
        app->add_option("--b", params.b, "ASM weight");
        app->add_option("--c", params.c, "ACE weight");
        app->add_option("--sigma2", params.sigma2, "white-noise variance in C_n");
        app->add_option("--out", out, "filter bank JSON path (the .bin blob is written next to it)")->required();
    }
    int run(const Globals& g, std::ostream&, std::ostream& err) {
        TrainingSet train;
        for (const auto& spec : classes) {
            const auto eq = spec.find('=');
            if (eq == std::string::npos) throw InvalidArgument("--class expects state=dir, got '" + spec + "'");
            std::vector<GrayImage> images;
            for (const auto& path : frames_in(spec.substr(eq + 1))) images.push_back(load_pgm(path));
            train.emplace_back(parse_state(spec.substr(0, eq)), std::move(images));
        }
        const FilterBank bank = synthesize_otmach(train, params, parse_domain(domain));
        save_filter_bank(bank, out);
        return finish(bank.diagnostics, g, err);
    }
};

struct ClassifyCmd {
    std::string input;
    std::string bank_path;
    std::string out;

    void add(CLI::App* app) {
        app->add_option("input", input, "frame PGM or frame directory")->required();
        app->add_option("--bank", bank_path, "filter bank JSON; default: trained on generated eyes")
            ;
        app->add_option("--out", out, "output path; default stdout");
    }
    int run(const Globals& g, std::ostream& out_stream, std::ostream& err) {
        Diagnostics diag;
        Sink s(out, out_stream);
        if (!is_dir(input)) {
            const GrayImage img = load_pgm(input);
            const FilterBank bank = bank_for(bank_path, img, g, diag);
            const Classification c = classify(img, bank);
            json scores = json::array();
            for (const auto& sc : c.scores.per_class)
                scores.push_back({{"state", state_name(sc.state)}, {"psr", jnum(sc.psr)}, {"mi", jnum(sc.mi)},
                                  {"fr", jnum(sc.fr)}});
            *s << json{{"state", state_name(c.state)},
                       {"fell_back_to_psr", c.scores.fell_back_to_psr},
                       {"scores", scores}}
                      .dump(2)
               << '\n';
            diag.insert(diag.end(), c.scores.diagnostics.begin(), c.scores.diagnostics.end());
            return finish(diag, g, err);
        }
        const auto frames = frames_in(input);
        const FilterBank bank = bank_for(bank_path, load_pgm(frames.front()), g, diag);
        *s << "frame,state\n";
        for (std::size_t k = 0; k < frames.size(); ++k)
            *s << k << ',' << state_name(classify(load_pgm(frames[k]), bank).state) << '\n';
        return finish(diag, g, err);
    }
};

struct PerclosCmd {
    std::string dir;
    double fps = 30.0;
    std::string bank_path;
    double window = 180.0;
    double step = 60.0;
    int max_blink_frames = -1;
    std::string out;

    void add(CLI::App* app) {
        app->add_option("dir", dir, "frame directory")->required();
        app->add_option("--fps", fps, "frame rate");
        app->add_option("--bank", bank_path, "filter bank JSON; default: trained on generated eyes")
            ;
        app->add_option("--window", window, "window length, seconds");
        app->add_option("--step", step, "spacing between reported values, seconds");
        app->add_option("--max-blink-frames", max_blink_frames, "longest closure treated as a blink; -1 = 0.4 s");
        app->add_option("--out", out, "CSV path; default stdout");
    }
    int run(const Globals& g, std::ostream& out_stream, std::ostream& err) {
        Diagnostics diag;
        const auto frames = frames_in(dir);
        const FilterBank bank = bank_for(bank_path, load_pgm(frames.front()), g, diag);
        std::vector<EyeState> states;
        states.reserve(frames.size());
        for (const auto& path : frames) states.push_back(classify(load_pgm(path), bank).state);
        PerclosWindow acc(fps, window, step);
        Sink s(out, out_stream);
        *s << "minute,end_frame,perclos\n";
        for (const auto& f : blink_filter(states, fps, max_blink_frames))
            if (auto v = acc.push(f)) *s << v->minute << ',' << v->end_frame << ',' << num(v->percent) << '\n';
        if (static_cast<long>(frames.size()) < acc.window_frames())
            diag.push_back("sequence shorter than one window; no values");
        return finish(diag, g, err);
    }
};

struct DecorrelationCmd {
    double rho = 0.99;
    int n = 64;

    void add(CLI::App* app) {
        app->add_option("--rho", rho, "Markov-1 correlation coefficient");
        app->add_option("--n", n, "signal length");
    }
    int run(const Globals&, std::ostream& out, std::ostream&) {
        const double dct = mean_off_diagonal(markov1_decorrelation(rho, n, TransformDomain::DCT));
        const double dft = mean_off_diagonal(markov1_decorrelation(rho, n, TransformDomain::DFT));
        out << json{{"rho", rho}, {"n", n}, {"dct_mean_off_diagonal", dct}, {"dft_mean_off_diagonal", dft},
                    {"dft_over_dct", jnum(dft / dct)}}
                   .dump(2)
            << '\n';
        return kOk;
    }
};

struct SimulateCmd {
    std::string spec;
    double fs = 500.0;
    double noise_var = 0.0;
    std::string out;

    void add(CLI::App* app) {
        app->add_option("--spec", spec, "motion spec JSON")->required();
        app->add_option("--fs", fs, "sampling rate, Hz (>= 60)");
        app->add_option("--noise-var", noise_var, "additive measurement noise variance, deg^2");
        app->add_option("--out", out, "CSV path; default stdout");
    }
    int run(const Globals& g, std::ostream& out_stream, std::ostream&) {
        if (noise_var > 0.0) g.require_seed("simulate-saccade with --noise-var");
        const MotionTrace trace = simulate_eye_motion(parse_motion_spec(spec), fs,
                                                      NoiseSpec{noise_var, g.seed_or_default()});
        Sink s(out, out_stream);
        *s << "k,t,position\n";
        for (std::size_t k = 0; k < trace.samples.size(); ++k)
            *s << k << ',' << num(k * trace.dt) << ',' << num(trace.samples[k]) << '\n';
        return kOk;
    }
};

struct TrackCmd {
    std::string dir;
    double fps = 200.0;
    std::string out;
    std::string summary;
    TrackerFlags tracker;
    OcularFlags ocular;

    void add(CLI::App* app) {
        app->add_option("dir", dir, "frame directory")->required();
        app->add_option("--fps", fps, "frame rate");
        app->add_option("--out", out, "CSV k,z,x_hat,v_hat; default stdout");
        app->add_option("--summary", summary,
                        "saccadic-ratio JSON; default stdout when --out is set, otherwise the diagnostic stream");
        tracker.add(app);
        ocular.add(app);
    }
    int run(const Globals& g, std::ostream& out_stream, std::ostream& err) {
        if (!(fps > 0.0)) throw InvalidArgument("--fps must be positive");
        const TrackerConfig cfg = tracker.resolve(1.0 / fps);
        const TrackResult r = track_sequence(dir, fps, ocular.resolve(), cfg);
        {
            Sink s(out, out_stream);
            *s << "k,z,x_hat,v_hat\n";
            for (std::size_t k = 0; k < r.position.size(); ++k)
                *s << k << ',' << num(r.measurements.samples[k]) << ',' << num(r.position[k]) << ','
                   << num(r.velocity[k]) << '\n';
        }
        json events = json::array();
        for (const auto& e : r.events)
            events.push_back({{"onset", e.onset_index}, {"end", e.end_index}, {"peak", e.peak_index},
                              {"peak_velocity", e.peak_velocity}, {"duration", e.duration}});
        json j{{"tracker", filter_name(cfg.filter)}, {"fps", fps}, {"events", events}};
        if (r.sr) {
            j["saccadic_ratio"] = {{"mean", r.sr->mean},
                                   {"stddev", r.sr->stddev},
                                   {"ratios", r.sr->ratios},
                                   {"units", cfg.sr_radians ? "rad/s^2" : "deg/s^2"}};
        } else {
            j["saccadic_ratio"] = nullptr;
        }
        const std::string text = j.dump(2) + '\n';
        if (!summary.empty()) {
            Sink s(summary, out_stream);
            *s << text;
        } else {
            (out.empty() ? err : out_stream) << text;
        }
        return finish(r.diagnostics, g, err);
    }
};

struct SynthCmd {
    std::string kind = "eye";
    int width = 0;
    int height = 0;
    double low = 60.0;
    double high = 190.0;
    int boundary = -1;
    std::vector<int> square;
    int period = 8;
    double decay = 0.0;
    std::string shape = "rectangle";
    double pupil_x = kUnset;
    double pupil_y = kUnset;
    double pupil_r = 4.0;
    double iris_r = 8.0;
    double coverage = 0.0;
    int supersample = 1;
    double angle = kUnset;
    double half_view = 60.0;
    double noise_var = 0.0;
    int frames = 0;
    std::string trace;
    bool ascii = false;
    std::string out;

    void add(CLI::App* app) {
        app->add_option("--kind", kind, "step | grating | shape | eye")
            ->check(CLI::IsMember({"step", "grating", "shape", "eye"}));
        app->add_option("--width", width, "0 = 50 for eyes, 64 otherwise");
        app->add_option("--height", height, "0 = 25 for eyes, 64 otherwise");
        app->add_option("--low", low, "dark intensity (step, shape)");
        app->add_option("--high", high, "bright intensity (step, shape)");
        app->add_option("--boundary", boundary, "step column; -1 = width / 2");
        app->add_option("--square", square, "step: bright square x y w h")->expected(4);
        app->add_option("--period", period, "grating period, pixels");
        app->add_option("--decay", decay, "grating contrast decay per column");
        app->add_option("--shape", shape, "shape name");
        app->add_option("--pupil-x", pupil_x, "eye: pupil x; default: image center");
        app->add_option("--pupil-y", pupil_y, "eye: pupil y; default: image center");
        app->add_option("--pupil-r", pupil_r, "eye: pupil radius");
        app->add_option("--iris-r", iris_r, "eye: iris radius");
        app->add_option("--coverage", coverage, "eye: lid coverage of the iris diameter, 0..1");
        app->add_option("--supersample", supersample, "eye: sub-samples per pixel side");
        app->add_option("--angle", angle, "eye: place the pupil at this angle, degrees");
        app->add_option("--half-view", half_view, "eye: half view angle for --angle and --trace");
        app->add_option("--noise-var", noise_var, "additive Gaussian noise variance");
        app->add_option("--frames", frames, "write this many frames into the --out directory");
        app->add_option("--trace", trace, "eye: one frame per row of a k,t,position CSV into the --out directory")
            ;
        app->add_flag("--ascii", ascii, "write plain (P2) PGM");
        app->add_option("--out", out, "PGM path, or a directory with --frames / --trace")->required();
    }

    SynthEyeSpec eye_spec() const {
        SynthEyeSpec s;
        s.width = width;
        s.height = height;
        s.pupil_center = {std::isnan(pupil_x) ? width / 2.0 : pupil_x, std::isnan(pupil_y) ? height / 2.0 : pupil_y};
        s.pupil_radius = pupil_r;
        s.iris_radius = iris_r;
        s.lid_coverage = coverage;
        s.supersample = supersample;
        if (!std::isnan(angle)) s = eye_spec_at_angle(s, angle, half_view);
        return s;
    }

    std::pair<GrayImage, json> render() const {
        json truth{{"kind", kind}, {"width", width}, {"height", height}};
        if (kind == "step") {
            std::optional<Rect> sq;
            if (!square.empty()) sq = Rect{square[0], square[1], square[2], square[3]};
            const int b = boundary >= 0 ? boundary : width / 2;
            truth.update({{"low", low}, {"high", high}, {"boundary", b}});
            if (sq) truth["square"] = square;
            return {synth_step_edge(width, height, low, high, b, sq), truth};
        }
        if (kind == "grating") {
            truth.update({{"period", period}, {"decay", decay}});
            return {synth_grating(width, height, period, decay), truth};
        }
        if (kind == "shape") {
            for (ShapeKind k : kAllShapes) {
                if (shape_name(k) != shape) continue;
                truth.update({{"shape", shape}, {"low", low}, {"high", high}});
                return {synth_shape(k, width, height, low, high), truth};
            }
            throw InvalidArgument("unknown shape '" + shape + "'");
        }
        const SyntheticEye eye = synth_eye(eye_spec());
        truth.update({{"pupil_center", point_json(eye.pupil_center)},
                      {"pupil_radius", eye.pupil_radius},
                      {"iris_radius", eye.iris_radius},
                      {"lid_coverage", eye.lid_coverage},
                      {"left_corner", point_json(eye.left_corner)},
                      {"right_corner", point_json(eye.right_corner)}});
        return {eye.image, truth};
    }

    int run(const Globals& g, std::ostream&, std::ostream&) {
        if (width == 0) width = kind == "eye" ? 50 : 64;
        if (height == 0) height = kind == "eye" ? 25 : 64;
        if (noise_var > 0.0) g.require_seed("synth with --noise-var");
        if (!trace.empty() && kind != "eye") throw InvalidArgument("--trace needs --kind eye");

        if (frames <= 0 && trace.empty()) {
            auto [img, truth] = render();
            if (noise_var > 0.0) img = add_noise(img, NoiseSpec{noise_var, g.seed_or_default()});
            truth["noise_variance"] = noise_var;
            save_pgm(img, out, ascii);
            std::ofstream(out + ".json") << truth.dump(2) << '\n';
            return kOk;
        }

        fs::create_directories(out);
        json truth = json::array();
        std::vector<GrayImage> images;
        if (!trace.empty()) {
            const MotionTrace t = read_trace_csv(trace);
            images = render_eye_sequence(t, eye_spec(), half_view);
            for (double a : t.samples) truth.push_back({{"angle", a}});
        } else {
            const auto [img, info] = render();
            images.assign(static_cast<std::size_t>(frames), img);
            truth.push_back(info);
        }
        for (std::size_t k = 0; k < images.size(); ++k) {
            GrayImage img = images[k];
            if (noise_var > 0.0) img = add_noise(img, NoiseSpec{noise_var, g.seed_or_default() + k});
            save_pgm(img, fs::path(out) / frame_name(static_cast<int>(k) + 1), ascii);
        }
        std::ofstream(fs::path(out) / "truth.json")
            << json{{"frames", images.size()}, {"noise_variance", noise_var}, {"truth", truth}}.dump(2) << '\n';
        return kOk;
    }
};

// Effective configuration of the chosen command as JSON. Numbers and flags
// keep their types; everything else is a string.
json dump_options(const CLI::App* app) {
    json j = json::object();
    for (const CLI::Option* opt : app->get_options()) {
        if (opt->get_name() == "--help") continue;
        std::string name = opt->get_name(false, true);
        while (!name.empty() && name.front() == '-') name.erase(name.begin());
        if (opt->get_expected_max() == 0) {
            j[name] = opt->count() > 0;
            continue;
        }
        std::vector<std::string> values = opt->count() > 0 ? opt->results() : std::vector<std::string>{};
        if (values.empty() && !opt->get_default_str().empty()) values = {opt->get_default_str()};
        auto typed = [](const std::string& s) -> json {
            if (s.empty()) return nullptr;
            char* end = nullptr;
            const long long i = std::strtoll(s.c_str(), &end, 10);
            if (end && *end == '\0') return i;
            const double v = std::strtod(s.c_str(), &end);
            if (end && *end == '\0') return std::isfinite(v) ? json(v) : json(nullptr);
            return s;
        };
        if (values.empty()) {
            j[name] = nullptr;
        } else if (values.size() == 1 && opt->get_expected_max() <= 1) {
            j[name] = typed(values.front());
        } else {
            json arr = json::array();
            for (const auto& v : values) arr.push_back(typed(v));
            j[name] = arr;
        }
    }
    return j;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Form Factor ocular measurement toolkit", "ocular"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);

    Globals g;
    unsigned long long seed = 0;
    app.add_flag("--strict", g.strict, "exit 3 when any numerical-degeneracy flag is raised");
    CLI::Option* seed_opt = app.add_option("--seed", seed, "seed for every randomized path");
    app.add_flag("--dump-config", g.dump_config, "print the effective configuration as JSON and exit");

    FfCmd ff;
    NoiseCmd noise;
    EdgesCmd edges;
    BemCmd bem;
    PupilCmd pupil;
    CornersCmd corners;
    TrainCmd train;
    ClassifyCmd classify_cmd;
    PerclosCmd perclos;
    DecorrelationCmd decor;
    SimulateCmd simulate;
    TrackCmd track;
    SynthCmd synth;

    std::vector<std::pair<CLI::App*, std::function<int()>>> commands;
    auto reg = [&](const char* name, const char* help, auto& cmd) {
        CLI::App* sub = app.add_subcommand(name, help);
        cmd.add(sub);
        commands.emplace_back(sub, [&cmd, &g, &out, &err] { return cmd.run(g, out, err); });
    };
    reg("ff", "form factor profiles and maps", ff);
    reg("noise-est", "blind signal and noise variance estimate", noise);
    reg("edges", "form factor edge detection", edges);
    reg("bem", "Baddeley error metric between two edge maps", bem);
    reg("pupil", "pupil center and diameter", pupil);
    reg("corners", "eye corners", corners);
    reg("train-filter", "train an OT-MACH filter bank", train);
    reg("classify", "eye state of a frame or a frame directory", classify_cmd);
    reg("perclos", "PERCLOS over a frame directory", perclos);
    reg("decorrelation", "Markov-1 decorrelation in the DCT and DFT domains", decor);
    reg("simulate-saccade", "simulate an eye motion trace", simulate);
    reg("track-saccade", "track a frame directory and report the saccadic ratio", track);
    reg("synth", "generate synthetic test images", synth);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        err << app.help();
        return kUsage;
    }
    if (seed_opt->count() > 0) g.seed = seed;

    for (auto& [sub, run] : commands) {
        if (!sub->parsed()) continue;
        if (g.dump_config) {
            json j{{"command", sub->get_name()},
                   {"strict", g.strict},
                   {"seed", g.seed ? json(*g.seed) : json(nullptr)},
                   {"options", dump_options(sub)}};
            out << j.dump(2) << '\n';
            return kOk;
        }
        try {
            return run();
        } catch (const InvalidArgument& e) {
            err << "error: " << e.what() << '\n';
            return kUsage;
        } catch (const InputError& e) {
            err << "error: " << e.what() << '\n';
            return kInput;
        } catch (const DegenerateInput& e) {
            err << "degenerate input: " << e.what() << '\n';
            return kDegenerate;
        } catch (const std::filesystem::filesystem_error& e) {
            err << "error: " << e.what() << '\n';
            return kInput;
        } catch (const Error& e) {
            err << "error: " << e.what() << '\n';
            return kInput;
        }
    }
    return kUsage;
}

}  // namespace ocular::cli
