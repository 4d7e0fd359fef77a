#pragma once

#include <Eigen/Dense>

#include "ocular/eye_state.hpp"

namespace ocular {

/// Unitary n-point transform matrices: DFT with W = exp(-j 2 pi / n), and the
/// orthonormal type-II DCT.
Eigen::MatrixXcd dft_matrix(int n);
Eigen::MatrixXd dct_matrix(int n);

/// Covariance rho^|i-j| of a first-order Markov sequence.
Eigen::MatrixXd markov1_covariance(double rho, int n);

/// |rho_v(i, j)| = |C_v(i, j)| / sqrt(C_v(i, i) C_v(j, j)) with C_v = A C_u A^H.
/// Zero-variance coefficients give 0 off the diagonal and 1 on it.
Eigen::MatrixXd markov1_decorrelation(double rho, int n, TransformDomain domain);

double mean_off_diagonal(const Eigen::MatrixXd& m);

}  // namespace ocular
