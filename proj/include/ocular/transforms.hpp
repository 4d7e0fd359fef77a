#pragma once

#include <complex>
#include <vector>

namespace ocular {

using Complex = std::complex<double>;

// Row-major rows x cols grids throughout.

/// Orthonormal 2-D type-II DCT and its inverse.
std::vector<double> dct2(const std::vector<double>& x, int rows, int cols);
std::vector<double> idct2(const std::vector<double>& X, int rows, int cols);

/// Unnormalized forward 2-D DFT; the inverse carries the 1/(rows*cols).
std::vector<Complex> dft2(const std::vector<Complex>& x, int rows, int cols);
std::vector<Complex> idft2(const std::vector<Complex>& X, int rows, int cols);

}  // namespace ocular
