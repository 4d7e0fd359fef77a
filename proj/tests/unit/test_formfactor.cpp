#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ocular/form_factor.hpp"
#include "ocular/image.hpp"

using namespace ocular;
using doctest::Approx;

namespace {

double ff(std::vector<double> v) { return form_factor(v); }

GrayImage half_dark_columns(int w, int h) {
    GrayImage img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) img(x, y) = y < h / 2 ? 0.0 : 255.0;
    return img;
}

}  // namespace

TEST_CASE("form factor of short sequences") {
    CHECK(ff({5, 5, 5, 5}) == Approx(1.0));
    std::vector<double> onehot(9, 0.0);
    onehot[4] = 7.0;
    CHECK(ff(onehot) == Approx(3.0));
    // sqrt(2 * 10) / 4
    CHECK(ff({1, 3}) == Approx(std::sqrt(5.0) / 2.0));
    CHECK(ff({0, 0, 0}) == Approx(1.0));
    CHECK_THROWS_AS(ff({1, -1, 2}), InvalidArgument);
    CHECK_THROWS_AS(ff({}), InvalidArgument);
}

TEST_CASE("form factor bounds and scale invariance") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 255.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> v(1 + trial % 17);
        for (double& x : v) x = u(rng);
        const double f = form_factor(v);
        CHECK(f >= 1.0 - 1e-12);
        CHECK(f <= std::sqrt(static_cast<double>(v.size())) + 1e-12);
        std::vector<double> scaled = v;
        for (double& x : scaled) x *= 3.7;
        CHECK(form_factor(scaled) == Approx(f).epsilon(1e-12));
    }
}

TEST_CASE("column profile of a half-dark column") {
    const GrayImage img = half_dark_columns(6, 10);
    const FFProfile h = horizontal_ff(img);
    REQUIRE(h.values.size() == 6);
    CHECK(h.n_per_sample == 10);
    for (double f : h.values) CHECK(f == Approx(std::sqrt(2.0)));
    const FFProfile v = vertical_ff(img);
    REQUIRE(v.values.size() == 10);
    for (double f : v.values) CHECK(f == Approx(1.0));
}

TEST_CASE("column and row profiles swap under transpose") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 255.0);
    GrayImage img(9, 7);
    for (double& p : img.pixels()) p = u(rng);
    const GrayImage t = transpose(img);
    const auto a = horizontal_ff(img).values;
    const auto b = vertical_ff(t).values;
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == Approx(b[i]).epsilon(1e-12));
}

TEST_CASE("radial profile of a half-dark ring") {
    PolarImage p;
    p.radii = 4;
    p.angles = 360;
    p.samples.resize(static_cast<std::size_t>(p.radii) * p.angles);
    for (int r = 0; r < p.radii; ++r)
        for (int a = 0; a < p.angles; ++a) p.samples[static_cast<std::size_t>(r) * p.angles + a] = a < 180 ? 0.0 : 90.0;
    const FFProfile prof = radial_ff(p);
    REQUIRE(prof.values.size() == 4);
    for (double f : prof.values) CHECK(f == Approx(std::sqrt(2.0)));
}

TEST_CASE("local form factor next to a step") {
    GrayImage img(8, 5);
    for (int y = 0; y < 5; ++y)
        for (int x = 4; x < 8; ++x) img(x, y) = 255.0;
    const FFMap m = local_ff(img, 3);
    REQUIRE(m.width == 8);
    CHECK(m.at(4, 2) == Approx(std::sqrt(1.5)));
    CHECK(m.at(3, 2) == Approx(std::sqrt(3.0)));
    CHECK(m.at(6, 2) == Approx(1.0));
    CHECK(m.at(1, 2) == Approx(1.0));  // all-zero window
    CHECK_THROWS_AS(local_ff(img, 2), InvalidArgument);
}

TEST_CASE("recovering the signal form factor") {
    CHECK(recover_ff_snr(std::sqrt(2.0), 1.0) == Approx(std::sqrt(1.5)));
    CHECK(recover_ff_stvr(std::sqrt(2.0), 0.5) == Approx(std::sqrt(1.5)));
    CHECK(recover_ff_snr(1.7, 0.0) == Approx(1.0));
    CHECK(recover_ff_stvr(1.7, 1.0) == Approx(1.7));
    CHECK(recover_ff_stvr(1.7, 0.0) == Approx(1.0));
    CHECK_THROWS_AS(recover_ff_snr(0.5, 1.0), InvalidArgument);
    CHECK_THROWS_AS(recover_ff_stvr(1.2, 1.5), InvalidArgument);
}

TEST_CASE("SNR and STVR recovery agree when STVR = SNR / (1 + SNR)") {
    for (double fg : {1.0, 1.1, 1.5, 2.5}) {
        for (double snr : {0.01, 0.3, 1.0, 10.0, 1e4}) {
            const double stvr = snr / (1.0 + snr);
            const double a = recover_ff_snr(fg, snr);
            CHECK(a == Approx(recover_ff_stvr(fg, stvr)).epsilon(1e-9));
            CHECK(a >= 1.0);
            CHECK(a <= fg + 1e-12);
        }
    }
}
