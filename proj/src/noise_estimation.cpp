#include "ocular/noise_estimation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ocular {

std::string method_name(NoiseMethod m) {
    switch (m) {
        case NoiseMethod::M1: return "M1";
        case NoiseMethod::M2: return "M2";
        case NoiseMethod::Weighted: return "weighted";
        case NoiseMethod::M3: return "M3";
        case NoiseMethod::M4: return "M4";
        case NoiseMethod::M5: return "M5";
    }
    return "?";
}

NoiseMethod parse_method(const std::string& name) {
    for (auto m : {NoiseMethod::M1, NoiseMethod::M2, NoiseMethod::Weighted, NoiseMethod::M3, NoiseMethod::M4,
                   NoiseMethod::M5})
        if (method_name(m) == name) return m;
    throw InvalidArgument("unknown noise estimation method '" + name + "'");
}

namespace {

VarianceEstimate split(double sigma_g2, double sigma_n2, NoiseMethod method, Diagnostics diag = {}) {
    VarianceEstimate est;
    est.method = method;
    est.sigma_g2 = sigma_g2;
    est.diagnostics = std::move(diag);
    if (sigma_n2 < 0.0) {
        est.diagnostics.push_back("noise variance estimate below 0; floored");
        sigma_n2 = 0.0;
    }
    if (sigma_n2 > sigma_g2) {
        est.diagnostics.push_back("noise variance estimate above total variance; capped");
        sigma_n2 = sigma_g2;
    }
    est.sigma_n2 = sigma_n2;
    est.sigma_s2 = sigma_g2 - sigma_n2;
    return est;
}

void check_config(const EstimatorConfig& cfg) {
    if (cfg.region_size < 2) throw InvalidArgument("region_size must be >= 2");
    if (!(cfg.c_alpha >= 0.0 && cfg.c_alpha <= 1.0)) throw InvalidArgument("c_alpha must be in [0, 1]");
    if (cfg.subspace_dim < 0 || cfg.subspace_dim == 1) throw InvalidArgument("subspace_dim must be 0 or >= 2");
}

}  // namespace

std::vector<double> tile_variances(const GrayImage& img, int region_size) {
    if (region_size < 2) throw InvalidArgument("region_size must be >= 2");
    const int tx = img.width() / region_size;
    const int ty = img.height() / region_size;
    if (tx == 0 || ty == 0) throw InvalidArgument("image smaller than one tile");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(tx) * ty);
    std::vector<double> tile(static_cast<std::size_t>(region_size) * region_size);
    for (int j = 0; j < ty; ++j) {
        for (int i = 0; i < tx; ++i) {
            std::size_t k = 0;
            for (int y = 0; y < region_size; ++y)
                for (int x = 0; x < region_size; ++x) tile[k++] = img(i * region_size + x, j * region_size + y);
            out.push_back(variance(tile));
        }
    }
    return out;
}

VarianceEstimate local_var_min(const GrayImage& img, const EstimatorConfig& cfg) {
    check_config(cfg);
    const auto v = tile_variances(img, cfg.region_size);
    return split(variance(img.pixels()), *std::min_element(v.begin(), v.end()), NoiseMethod::M1);
}

VarianceEstimate local_var_avg(const GrayImage& img, const EstimatorConfig& cfg) {
    check_config(cfg);
    return split(variance(img.pixels()), mean(tile_variances(img, cfg.region_size)), NoiseMethod::M2);
}

VarianceEstimate local_var_weighted(const GrayImage& img, const EstimatorConfig& cfg) {
    check_config(cfg);
    const auto v = tile_variances(img, cfg.region_size);
    const double lo = *std::min_element(v.begin(), v.end());
    const double avg = mean(v);
    return split(variance(img.pixels()), cfg.c_alpha * lo + (1.0 - cfg.c_alpha) * avg, NoiseMethod::Weighted);
}

int mdl_signal_dimension(const std::vector<double>& eig, int snapshots) {
    const int p = static_cast<int>(eig.size());
    if (p == 0) return 0;
    const double top = std::max(std::abs(eig.front()), std::numeric_limits<double>::min());
    // Zero eigenvalues (rank deficiency) would send log(G) to -inf.
    const double floor = top * 1e-13;
    std::vector<double> lam(p);
    for (int i = 0; i < p; ++i) lam[i] = std::max(std::abs(eig[i]), floor);

    const double n = static_cast<double>(snapshots);
    int best_k = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < p; ++k) {
        const int m = p - k;
        double log_sum = 0.0;
        double sum = 0.0;
        for (int i = k; i < p; ++i) {
            log_sum += std::log(lam[i]);
            sum += lam[i];
        }
        const double log_geo = log_sum / m;
        const double log_ari = std::log(sum / m);
        const double mdl = -n * m * (log_geo - log_ari) + 0.5 * k * (2.0 * p - k) * std::log(n);
        if (mdl < best) {
            best = mdl;
            best_k = k;
        }
    }
    return best_k;
}

SubspaceSpectrum subspace_spectrum(const GrayImage& img, const EstimatorConfig& cfg) {
    check_config(cfg);
    if (img.empty()) throw InvalidArgument("subspace_variance: empty image");
    const int p = cfg.subspace_dim == 0 ? img.width() : cfg.subspace_dim;
    const int per_row = img.width() / p;
    const int n = per_row * img.height();
    if (per_row == 0 || n < 2) throw InvalidArgument("subspace_variance: too few snapshots for the subspace dimension");

    const double mu = mean(img.pixels());
    Eigen::MatrixXd samples(p, n);
    int col = 0;
    for (int y = 0; y < img.height(); ++y)
        for (int s = 0; s < per_row; ++s, ++col)
            for (int i = 0; i < p; ++i) samples(i, col) = img(s * p + i, y) - mu;
    const Eigen::MatrixXd r = samples * samples.transpose() / static_cast<double>(n);
    if (r.trace() <= 0.0) throw DegenerateInput("subspace_variance: rank-0 autocorrelation matrix");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(r, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = solver.eigenvalues();  // ascending
    SubspaceSpectrum spec;
    spec.snapshots = n;
    spec.eigenvalues.resize(p);
    for (int i = 0; i < p; ++i) spec.eigenvalues[i] = ev(p - 1 - i);
    spec.signal_dim = mdl_signal_dimension(spec.eigenvalues, n);
    return spec;
}

VarianceEstimate subspace_variance(const GrayImage& img, const EstimatorConfig& cfg) {
    const SubspaceSpectrum spec = subspace_spectrum(img, cfg);
    const int p = static_cast<int>(spec.eigenvalues.size());
    Diagnostics diag;
    if (spec.signal_dim >= p) diag.push_back("MDL left no noise subspace");
    double noise = 0.0;
    for (int i = spec.signal_dim; i < p; ++i) noise += std::abs(spec.eigenvalues[i]);
    noise /= std::max(p - spec.signal_dim, 1);
    // With full tiling, sigma_g2 - noise equals the normalized sum of
    // (lambda_i - noise) over the signal subspace.
    return split(variance(img.pixels()), noise, NoiseMethod::M3, std::move(diag));
}

double autocorrelation(const GrayImage& img, int dx, int dy) {
    const int w = img.width();
    const int h = img.height();
    double acc = 0.0;
    for (int y = 0; y < h; ++y) {
        const int yy = ((y + dy) % h + h) % h;
        for (int x = 0; x < w; ++x) {
            const int xx = ((x + dx) % w + w) % w;
            acc += img(x, y) * img(xx, yy);
        }
    }
    return acc / static_cast<double>(img.size());
}

VarianceEstimate acs_variance(const GrayImage& img, const EstimatorConfig& cfg) {
    check_config(cfg);
    if (img.empty()) throw InvalidArgument("acs_variance: empty image");
    const bool horizontal = cfg.acs_direction == AcsDirection::Horizontal;
    const int extent = horizontal ? img.width() : img.height();
    if (extent < 3) throw InvalidArgument("acs_variance: need at least 3 samples along the lag direction");
    const double r0 = autocorrelation(img, 0, 0);
    const double r1 = horizontal ? autocorrelation(img, 1, 0) : autocorrelation(img, 0, 1);
    const double r2 = horizontal ? autocorrelation(img, 2, 0) : autocorrelation(img, 0, 2);
    const double rs0 = 2.0 * r1 - r2;
    Diagnostics diag;
    if (rs0 > r0) diag.push_back("ACS extrapolation exceeds the observed peak");
    const NoiseMethod method = horizontal ? NoiseMethod::M4 : NoiseMethod::M5;
    // r0 - mu^2 is the total variance, so sigma_s2 = rs0 - mu^2 is the
    // complement of sigma_n2 = r0 - rs0.
    return split(variance(img.pixels()), r0 - rs0, method, std::move(diag));
}

VarianceEstimate estimate_variance(const GrayImage& img, NoiseMethod method, const EstimatorConfig& cfg) {
    EstimatorConfig c = cfg;
    switch (method) {
        case NoiseMethod::M1: return local_var_min(img, c);
        case NoiseMethod::M2: return local_var_avg(img, c);
        case NoiseMethod::Weighted: return local_var_weighted(img, c);
        case NoiseMethod::M3: return subspace_variance(img, c);
        case NoiseMethod::M4: c.acs_direction = AcsDirection::Horizontal; return acs_variance(img, c);
        case NoiseMethod::M5: c.acs_direction = AcsDirection::Vertical; return acs_variance(img, c);
    }
    throw InvalidArgument("unknown method");
}

NoiseRatio estimate_snr(const VarianceEstimate& est) {
    NoiseRatio out{NoiseRatio::Kind::SNR, 0.0, {}};
    const double denom = est.sigma_g2 - est.sigma_s2;
    if (est.sigma_s2 <= 0.0) return out;
    if (denom <= 0.0) {
        out.value = std::numeric_limits<double>::infinity();
        out.diagnostics.push_back("no residual noise variance; SNR is infinite");
        return out;
    }
    out.value = est.sigma_s2 / denom;
    return out;
}

NoiseRatio estimate_stvr(const VarianceEstimate& est) {
    NoiseRatio out{NoiseRatio::Kind::STVR, 0.0, {}};
    if (est.sigma_g2 <= 0.0) {
        out.diagnostics.push_back("zero total variance; STVR undefined, reported as 1");
        out.value = 1.0;
        return out;
    }
    out.value = std::clamp(est.sigma_s2 / est.sigma_g2, 0.0, 1.0);
    return out;
}

double snr_error_pct(double sigma_s2, double delta_sigma_s2, double sigma_n2) {
    if (!(sigma_s2 > 0.0)) throw InvalidArgument("snr_error_pct: sigma_s2 must be positive");
    const double sigma_g2 = sigma_s2 + sigma_n2;
    return 100.0 * sigma_g2 * delta_sigma_s2 / (sigma_s2 * (sigma_n2 - delta_sigma_s2));
}

double stvr_error_pct(double sigma_s2, double delta_sigma_s2) {
    if (!(sigma_s2 > 0.0)) throw InvalidArgument("stvr_error_pct: sigma_s2 must be positive");
    return 100.0 * delta_sigma_s2 / sigma_s2;
}

}  // namespace ocular
