#include "ocular/transforms.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>

#include "ocular/errors.hpp"

namespace ocular {
namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

void check_shape(std::size_t n, int rows, int cols) {
    if (rows <= 0 || cols <= 0 || n != static_cast<std::size_t>(rows) * cols)
        throw InvalidArgument("transform: data size does not match shape");
}

double dct_scale(int k, int n) { return k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n); }

std::vector<double> run_r2r(std::vector<double> data, int rows, int cols, fftw_r2r_kind kind) {
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_r2r_2d(rows, cols, data.data(), data.data(), kind, kind, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return data;
}

std::vector<Complex> run_dft(std::vector<Complex> data, int rows, int cols, int sign) {
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_2d(rows, cols, buf, buf, sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return data;
}

}  // namespace

std::vector<double> dct2(const std::vector<double>& x, int rows, int cols) {
    check_shape(x.size(), rows, cols);
    // REDFT10 gives 2 * sum per dimension; the orthonormal factor is s_k / 2.
    std::vector<double> out = run_r2r(x, rows, cols, FFTW_REDFT10);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            out[static_cast<std::size_t>(r) * cols + c] *= 0.25 * dct_scale(r, rows) * dct_scale(c, cols);
    return out;
}

std::vector<double> idct2(const std::vector<double>& X, int rows, int cols) {
    check_shape(X.size(), rows, cols);
    // REDFT01 computes X_0 + 2 * sum_{k>0} X_k cos(...), so pre-scale by s_0
    // at k = 0 and s_k / 2 elsewhere.
    std::vector<double> in = X;
    for (int r = 0; r < rows; ++r) {
        const double fr = r == 0 ? dct_scale(0, rows) : 0.5 * dct_scale(r, rows);
        for (int c = 0; c < cols; ++c) {
            const double fc = c == 0 ? dct_scale(0, cols) : 0.5 * dct_scale(c, cols);
            in[static_cast<std::size_t>(r) * cols + c] *= fr * fc;
        }
    }
    return run_r2r(std::move(in), rows, cols, FFTW_REDFT01);
}

std::vector<Complex> dft2(const std::vector<Complex>& x, int rows, int cols) {
    check_shape(x.size(), rows, cols);
    return run_dft(x, rows, cols, FFTW_FORWARD);
}

std::vector<Complex> idft2(const std::vector<Complex>& X, int rows, int cols) {
    check_shape(X.size(), rows, cols);
    std::vector<Complex> out = run_dft(X, rows, cols, FFTW_BACKWARD);
    const double inv = 1.0 / (static_cast<double>(rows) * cols);
    for (auto& v : out) v *= inv;
    return out;
}

}  // namespace ocular
