#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ocular/errors.hpp"
#include "ocular/image.hpp"
#include "ocular/transforms.hpp"

namespace ocular {

enum class EyeState { Open, PartiallyClosed, Closed };

std::string state_name(EyeState s);
EyeState parse_state(const std::string& name);

enum class TransformDomain { DCT, DFT };

std::string domain_name(TransformDomain d);
TransformDomain parse_domain(const std::string& name);

struct OtMachParams {
    double a = 0.1;
    double b = 0.2;
    double c = 0.7;
    double sigma2 = 1.0;
    double epsilon = 1e-12;
};

/// One class of an OT-MACH bank. All vectors are transform-domain, row-major
/// rows x cols. For the DCT domain the imaginary parts are zero.
struct ClassFilter {
    EyeState state = EyeState::Open;
    std::vector<Complex> h;
    std::vector<Complex> mean;
    std::vector<double> var;
    int training_count = 0;
};

struct FilterBank {
    TransformDomain domain = TransformDomain::DCT;
    int rows = 0;
    int cols = 0;
    OtMachParams params;
    std::vector<ClassFilter> classes;
    Diagnostics diagnostics;
};

struct CorrelationSurface {
    int rows = 0;
    int cols = 0;
    std::vector<double> values;
    double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
};

using TrainingSet = std::vector<std::pair<EyeState, std::vector<GrayImage>>>;

std::vector<Complex> forward_transform(const GrayImage& img, TransformDomain domain);

FilterBank synthesize_otmach(const TrainingSet& train, const OtMachParams& params = {},
                             TransformDomain domain = TransformDomain::DCT);

/// DFT: IDFT(T * conj(H)), a circular correlation. DCT: IDCT(T * H).
CorrelationSurface correlate(const GrayImage& test, const ClassFilter& filter, TransformDomain domain);

/// Spatial construction of the DCT-path output from a spatial filter:
/// symmetric extension of test and filter to 2M x 2N, circular convolution
/// with each other and with the modulating kernel Z, cropped to M x N.
/// Brute force, O((MN)^2); intended as a verification oracle.
CorrelationSurface dct_spatial_equivalent(const GrayImage& test, const GrayImage& spatial_filter);

/// The separable modulating kernel z_n(i) of length 2n.
std::vector<double> dct_modulation_kernel(int n);

/// (peak - mu) / sigma over the 20x20 neighbourhood of the peak (wrapping
/// circularly) minus the central 5x5. +infinity when sigma is 0.
double psr(const CorrelationSurface& surface);

/// (H(a) + H(b)) / H(a, b) with 256-bin histograms after min-max scaling.
/// Returns 0 when the joint histogram has a single occupied bin.
double mutual_information(const GrayImage& a, const CorrelationSurface& b);
double mutual_information(const std::vector<double>& a, const std::vector<double>& b);

/// Sum over coefficients of |mean - t|^2 / max(var, epsilon).
double fisher_ratio(const std::vector<Complex>& test_transform, const std::vector<Complex>& class_mean,
                    const std::vector<double>& class_var, double epsilon = 1e-12);

struct ClassScores {
    EyeState state = EyeState::Open;
    double psr = 0.0;
    double mi = 0.0;
    double fr = 0.0;
};

struct ClassificationScores {
    std::vector<ClassScores> per_class;
    bool fell_back_to_psr = false;
    Diagnostics diagnostics;
};

struct Classification {
    EyeState state = EyeState::Open;
    ClassificationScores scores;
};

/// Two-of-three vote over max PSR, max MI and min FR; a three-way split
/// falls back to the PSR winner.
Classification classify(const GrayImage& test, const FilterBank& bank);

/// Vote on precomputed scores (exposed for testing the decision rule).
Classification decide(ClassificationScores scores);

}  // namespace ocular
