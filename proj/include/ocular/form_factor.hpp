#pragma once

#include <span>
#include <vector>

#include "ocular/errors.hpp"
#include "ocular/image.hpp"

namespace ocular {

enum class FFAxis { Horizontal, Vertical, Radial };

struct FFProfile {
    FFAxis axis = FFAxis::Horizontal;
    std::vector<double> values;
    int n_per_sample = 0;
};

struct FFMap {
    int width = 0;
    int height = 0;
    int window = 3;
    std::vector<double> values;
    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

/// sqrt(N * sum x^2) / sum x, i.e. RMS over mean. Returns 1 for an all-zero
/// sequence. Throws InvalidArgument on negative or empty input.
double form_factor(std::span<const double> seq);

FFProfile horizontal_ff(const GrayImage& img);
FFProfile vertical_ff(const GrayImage& img);
FFProfile radial_ff(const PolarImage& polar);
FFMap local_ff(const GrayImage& img, int window = 3);

struct RecoveredFF {
    double value = 1.0;
    Diagnostics diagnostics;
};

/// F_s from F_g and SNR: sqrt((F_g^2 + 1/SNR) / (1 + 1/SNR)), clamped to >= 1.
RecoveredFF recover_ff_snr_checked(double f_g, double snr);
double recover_ff_snr(double f_g, double snr);

/// F_s from F_g and STVR: sqrt(STVR * (F_g^2 - 1) + 1), clamped to >= 1.
RecoveredFF recover_ff_stvr_checked(double f_g, double stvr);
double recover_ff_stvr(double f_g, double stvr);

}  // namespace ocular
