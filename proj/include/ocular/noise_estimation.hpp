#pragma once

#include <string>
#include <vector>

#include "ocular/errors.hpp"
#include "ocular/image.hpp"

namespace ocular {

/// M1 min local variance, M2 mean local variance, M3 subspace (MDL split),
/// M4/M5 autocorrelation extrapolation along rows/columns. Weighted is the
/// c_alpha blend of M1 and M2.
enum class NoiseMethod { M1, M2, Weighted, M3, M4, M5 };

std::string method_name(NoiseMethod m);
NoiseMethod parse_method(const std::string& name);

enum class AcsDirection { Horizontal, Vertical };

struct EstimatorConfig {
    int region_size = 8;
    double c_alpha = 0.5;
    AcsDirection acs_direction = AcsDirection::Horizontal;
    /// Snapshot length for M3. Rows are cut into non-overlapping segments of
    /// this many pixels; 0 uses whole rows.
    int subspace_dim = 8;
};

struct VarianceEstimate {
    double sigma_s2 = 0.0;
    double sigma_n2 = 0.0;
    double sigma_g2 = 0.0;
    NoiseMethod method = NoiseMethod::M1;
    Diagnostics diagnostics;
};

/// Population variance of every full region_size x region_size tile, in
/// row-major tile order.
std::vector<double> tile_variances(const GrayImage& img, int region_size);

VarianceEstimate local_var_min(const GrayImage& img, const EstimatorConfig& cfg = {});
VarianceEstimate local_var_avg(const GrayImage& img, const EstimatorConfig& cfg = {});
VarianceEstimate local_var_weighted(const GrayImage& img, const EstimatorConfig& cfg = {});

struct SubspaceSpectrum {
    std::vector<double> eigenvalues;  // descending
    int signal_dim = 0;               // N_sd chosen by MDL
    int snapshots = 0;
};

SubspaceSpectrum subspace_spectrum(const GrayImage& img, const EstimatorConfig& cfg = {});
VarianceEstimate subspace_variance(const GrayImage& img, const EstimatorConfig& cfg = {});

/// Wax-Kailath MDL over a descending eigen-spectrum from `snapshots` samples.
int mdl_signal_dimension(const std::vector<double>& eigenvalues_desc, int snapshots);

/// Periodic autocorrelation r(dx, dy), mean not removed.
double autocorrelation(const GrayImage& img, int dx, int dy);
VarianceEstimate acs_variance(const GrayImage& img, const EstimatorConfig& cfg = {});

VarianceEstimate estimate_variance(const GrayImage& img, NoiseMethod method, const EstimatorConfig& cfg = {});

struct NoiseRatio {
    enum class Kind { SNR, STVR };
    Kind kind = Kind::SNR;
    double value = 0.0;
    Diagnostics diagnostics;
};

NoiseRatio estimate_snr(const VarianceEstimate& est);
NoiseRatio estimate_stvr(const VarianceEstimate& est);

/// Percentage error of the SNR estimate caused by an image-variance error
/// delta_sigma_s2 (estimate minus truth).
double snr_error_pct(double sigma_s2, double delta_sigma_s2, double sigma_n2);
/// Percentage error of the STVR estimate; independent of the noise level.
double stvr_error_pct(double sigma_s2, double delta_sigma_s2);

}  // namespace ocular
