#include "ocular/form_factor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ocular {

double form_factor(std::span<const double> seq) {
    if (seq.empty()) throw InvalidArgument("form_factor: empty sequence");
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double x : seq) {
        if (x < 0.0) throw InvalidArgument("form_factor: negative element");
        sum += x;
        sum_sq += x * x;
    }
    if (sum == 0.0) return 1.0;
    const double f = std::sqrt(static_cast<double>(seq.size()) * sum_sq) / sum;
    // Rounding can leave f a hair outside [1, sqrt(N)].
    return std::clamp(f, 1.0, std::sqrt(static_cast<double>(seq.size())));
}

FFProfile horizontal_ff(const GrayImage& img) {
    if (img.empty()) throw InvalidArgument("horizontal_ff: empty image");
    FFProfile p{FFAxis::Horizontal, std::vector<double>(img.width()), img.height()};
    for (int x = 0; x < img.width(); ++x) p.values[x] = form_factor(img.column(x));
    return p;
}

FFProfile vertical_ff(const GrayImage& img) {
    if (img.empty()) throw InvalidArgument("vertical_ff: empty image");
    FFProfile p{FFAxis::Vertical, std::vector<double>(img.height()), img.width()};
    for (int y = 0; y < img.height(); ++y) p.values[y] = form_factor(img.row(y));
    return p;
}

FFProfile radial_ff(const PolarImage& polar) {
    FFProfile p{FFAxis::Radial, std::vector<double>(polar.radii), polar.angles};
    for (int r = 0; r < polar.radii; ++r) p.values[r] = form_factor(polar.ring(r));
    return p;
}

FFMap local_ff(const GrayImage& img, int window) {
    if (window < 3 || window % 2 == 0) throw InvalidArgument("local_ff: window must be odd and >= 3");
    FFMap map{img.width(), img.height(), window, std::vector<double>(img.size())};
    const int half = window / 2;
    std::vector<double> buf(static_cast<std::size_t>(window) * window);
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            std::size_t k = 0;
            for (int dy = -half; dy <= half; ++dy)
                for (int dx = -half; dx <= half; ++dx) buf[k++] = img.clamped(x + dx, y + dy);
            map.values[static_cast<std::size_t>(y) * img.width() + x] = form_factor(buf);
        }
    }
    return map;
}

RecoveredFF recover_ff_snr_checked(double f_g, double snr) {
    if (!(f_g >= 1.0 - 1e-12)) throw InvalidArgument("recover_ff_snr: F_g must be >= 1");
    if (!(snr >= 0.0)) throw InvalidArgument("recover_ff_snr: SNR must be >= 0");
    RecoveredFF out;
    if (snr == 0.0) {
        out.value = 1.0;
        return out;
    }
    if (std::isinf(snr)) {
        out.value = std::max(f_g, 1.0);
        return out;
    }
    const double inv = 1.0 / snr;
    const double radicand = (f_g * f_g + inv) / (1.0 + inv);
    if (radicand < 1.0) {
        out.diagnostics.push_back("recovered F_s radicand below 1; clamped");
        out.value = 1.0;
        return out;
    }
    out.value = std::sqrt(radicand);
    return out;
}

double recover_ff_snr(double f_g, double snr) { return recover_ff_snr_checked(f_g, snr).value; }

RecoveredFF recover_ff_stvr_checked(double f_g, double stvr) {
    if (!(f_g >= 1.0 - 1e-12)) throw InvalidArgument("recover_ff_stvr: F_g must be >= 1");
    if (!(stvr >= 0.0 && stvr <= 1.0)) throw InvalidArgument("recover_ff_stvr: STVR must be in [0, 1]");
    RecoveredFF out;
    const double radicand = stvr * (f_g * f_g - 1.0) + 1.0;
    if (radicand < 1.0) {
        out.diagnostics.push_back("recovered F_s radicand below 1; clamped");
        out.value = 1.0;
        return out;
    }
    out.value = std::sqrt(radicand);
    return out;
}

double recover_ff_stvr(double f_g, double stvr) { return recover_ff_stvr_checked(f_g, stvr).value; }

}  // namespace ocular
