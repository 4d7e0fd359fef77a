#include "ocular/decorrelation.hpp"

#include <cmath>
#include <numbers>

namespace ocular {

Eigen::MatrixXcd dft_matrix(int n) {
    Eigen::MatrixXcd a(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m)
            a(k, m) = std::polar(scale, -2.0 * std::numbers::pi * ((static_cast<long>(k) * m) % n) / n);
    return a;
}

Eigen::MatrixXd dct_matrix(int n) {
    Eigen::MatrixXd a(n, n);
    for (int k = 0; k < n; ++k) {
        const double s = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
        for (int m = 0; m < n; ++m) a(k, m) = s * std::cos(std::numbers::pi * (2.0 * m + 1.0) * k / (2.0 * n));
    }
    return a;
}

Eigen::MatrixXd markov1_covariance(double rho, int n) {
    Eigen::MatrixXd c(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c(i, j) = i == j ? 1.0 : std::pow(rho, std::abs(i - j));
    return c;
}

Eigen::MatrixXd markov1_decorrelation(double rho, int n, TransformDomain domain) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidArgument("markov1_decorrelation: rho must be in [0, 1]");
    if (n < 2) throw InvalidArgument("markov1_decorrelation: n must be >= 2");
    const Eigen::MatrixXd cu = markov1_covariance(rho, n);
    Eigen::MatrixXd mag(n, n);
    Eigen::VectorXd diag(n);
    if (domain == TransformDomain::DFT) {
        const Eigen::MatrixXcd a = dft_matrix(n);
        const Eigen::MatrixXcd cv = a * cu.cast<std::complex<double>>() * a.adjoint();
        mag = cv.cwiseAbs();
        diag = cv.diagonal().real();
    } else {
        const Eigen::MatrixXd a = dct_matrix(n);
        const Eigen::MatrixXd cv = a * cu * a.transpose();
        mag = cv.cwiseAbs();
        diag = cv.diagonal();
    }
    const double tiny = 1e-14 * diag.cwiseAbs().maxCoeff();
    Eigen::MatrixXd out(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) {
                out(i, j) = 1.0;
                continue;
            }
            const double d = diag(i) * diag(j);
            out(i, j) = (diag(i) <= tiny || diag(j) <= tiny) ? 0.0 : mag(i, j) / std::sqrt(d);
        }
    }
    return out;
}

double mean_off_diagonal(const Eigen::MatrixXd& m) {
    const auto n = m.rows();
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (i != j) s += m(i, j);
    return s / static_cast<double>(n * (n - 1));
}

}  // namespace ocular
