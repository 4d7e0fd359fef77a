#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "ocular/edges.hpp"
#include "ocular/synth.hpp"

using namespace ocular;
using doctest::Approx;

namespace {

ESIMap esi_of(int w, int h, std::vector<double> values) {
    ESIMap m;
    m.width = w;
    m.height = h;
    m.values = std::move(values);
    return m;
}

// Direct transcription of the metric with brute-force nearest distances.
double bem_oracle(const EdgeMap& a, const EdgeMap& b, double p, double c) {
    auto nearest = [](const EdgeMap& m, int x, int y) {
        double best = std::numeric_limits<double>::infinity();
        for (int yy = 0; yy < m.height; ++yy)
            for (int xx = 0; xx < m.width; ++xx)
                if (m.at(xx, yy)) best = std::min(best, std::hypot(x - xx, y - yy));
        return best;
    };
    double acc = 0.0;
    for (int y = 0; y < a.height; ++y)
        for (int x = 0; x < a.width; ++x)
            acc += std::pow(std::abs(std::min(nearest(a, x, y), c) - std::min(nearest(b, x, y), c)), p);
    return std::pow(acc / (a.width * a.height), 1.0 / p) / c;
}

EdgeMap random_map(int w, int h, double density, std::mt19937_64& rng) {
    std::bernoulli_distribution on(density);
    EdgeMap m(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) m.set(x, y, on(rng));
    return m;
}

}  // namespace

TEST_CASE("ESI of hand-built windows") {
    CHECK(esi_map(GrayImage(5, 5, 80.0)).at(2, 2) == Approx(1.0));
    GrayImage one(3, 3);
    one(1, 1) = 200.0;
    // Border replication drags the lone pixel into neighbouring windows, so
    // only the centre sees exactly one nonzero pixel.
    CHECK(esi_map(one).at(1, 1) == Approx(1.0 / 9.0));

    GrayImage step(3, 3);
    for (int y = 1; y < 3; ++y)
        for (int x = 0; x < 3; ++x) step(x, y) = 255.0;
    GrayImage padded(5, 5);
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x) padded(x + 1, y + 1) = step(x, y);
    CHECK(esi_map(padded).at(2, 2) == Approx(2.0 / 3.0));
    CHECK(esi_map(GrayImage(4, 4)).at(1, 1) == Approx(1.0));
}

TEST_CASE("ESI range and illumination invariance") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 255.0);
    GrayImage img(20, 15);
    for (double& p : img.pixels()) p = u(rng);
    for (int window : {3, 5}) {
        const ESIMap a = esi_map(img, window);
        const ESIMap b = esi_map(scale_intensity(img, 0.37), window);
        for (std::size_t i = 0; i < a.values.size(); ++i) {
            CHECK(a.values[i] >= 1.0 / (window * window) - 1e-12);
            CHECK(a.values[i] <= 1.0 + 1e-12);
            CHECK(std::abs(a.values[i] - b.values[i]) < 1e-12);
        }
    }
}

TEST_CASE("noise compensation arithmetic") {
    const ESIMap g = esi_of(3, 1, {0.5, 1.0, 0.2});
    const ESIMap same = compensate_esi(g, 1.0);
    for (std::size_t i = 0; i < 3; ++i) CHECK(same.values[i] == Approx(g.values[i]));
    const ESIMap half = compensate_esi(g, 0.5);
    CHECK(half.values[0] == Approx(1.0 / std::sqrt(2.5)));
    CHECK(half.values[1] == Approx(1.0));
    CHECK(compensate_esi(g, 0.0).values[2] == Approx(1.0));
}

TEST_CASE("compensation at moment level undoes additive noise") {
    // alpha^-2 = F^2 = 1 + var / mean^2 for a window; noise adds to var only.
    const double mu = 100.0, var_s = 900.0, var_n = 300.0;
    const double alpha_s = 1.0 / (1.0 + var_s / (mu * mu));
    const double alpha_g = 1.0 / (1.0 + (var_s + var_n) / (mu * mu));
    const double stvr = var_s / (var_s + var_n);
    const ESIMap out = compensate_esi(esi_of(1, 1, {std::sqrt(alpha_g)}), stvr);
    CHECK(out.values[0] == Approx(std::sqrt(alpha_s)).epsilon(1e-12));
}

TEST_CASE("non-minimum suppression keeps one pixel across a band") {
    // Vertical band of alphas 0.7 / 0.6 / 0.8 on a unit background.
    ESIMap m = esi_of(9, 7, std::vector<double>(63, 1.0));
    for (int y = 0; y < 7; ++y) {
        m.at(3, y) = 0.7;
        m.at(4, y) = 0.6;
        m.at(5, y) = 0.8;
    }
    const ESIMap s = nms_min(m, 5);
    for (int y = 0; y < 7; ++y) {
        CHECK(s.at(4, y) == Approx(0.6));
        CHECK(s.at(3, y) == Approx(1.0));
        CHECK(s.at(5, y) == Approx(1.0));
    }

    ESIMap ridge = esi_of(9, 7, std::vector<double>(63, 1.0));
    for (int y = 0; y < 7; ++y) ridge.at(4, y) = 0.55;
    CHECK(nms_min(ridge, 5).values == ridge.values);
}

TEST_CASE("thresholding uses the closed band") {
    EdgeParams p;
    const ESIMap m = esi_of(5, 1, {1.0, 0.7, 0.95, 0.5, 0.3});
    const EdgeMap e = threshold_edges(m, p);
    CHECK_FALSE(e.at(0, 0));
    CHECK(e.at(1, 0));
    CHECK_FALSE(e.at(2, 0));
    CHECK(e.at(3, 0));
    CHECK_FALSE(e.at(4, 0));
    p.alpha_low = 0.9;
    p.alpha_high = 0.8;
    CHECK_THROWS_AS(validate(p), InvalidArgument);
}

TEST_CASE("low-contrast steps give a single-pixel boundary") {
    for (auto [lo, hi] : {std::pair{0.0, 1.0}, std::pair{254.0, 255.0}, std::pair{30.0, 200.0}}) {
        CAPTURE(lo);
        const GrayImage img = synth_step_edge(32, 24, lo, hi, 16);
        const EdgeMap e = detect_edges(img);
        for (int y = 0; y < 24; ++y) {
            int n = 0, col = -1;
            for (int x = 0; x < 32; ++x)
                if (e.at(x, y)) {
                    ++n;
                    col = x;
                }
            CHECK(n == 1);
            CHECK(std::abs(col - 16) <= 1);
        }
    }
    CHECK(detect_edges(GrayImage(16, 16, 90.0)).count() == 0);
}

TEST_CASE("distance transform matches brute force") {
    std::mt19937_64 rng(8);
    const EdgeMap m = random_map(13, 9, 0.05, rng);
    const auto d = distance_transform(m);
    for (int y = 0; y < 9; ++y)
        for (int x = 0; x < 13; ++x) {
            double best = std::numeric_limits<double>::infinity();
            for (int yy = 0; yy < 9; ++yy)
                for (int xx = 0; xx < 13; ++xx)
                    if (m.at(xx, yy)) best = std::min(best, std::hypot(x - xx, y - yy));
            CHECK(d[static_cast<std::size_t>(y) * 13 + x] == Approx(best));
        }
    CHECK(std::isinf(distance_transform(EdgeMap(4, 4))[0]));
}

TEST_CASE("Baddeley metric against a brute-force oracle") {
    EdgeMap a(10, 10), b(10, 10);
    a.set(0, 0);
    b.set(3, 4);
    const double c = std::hypot(10.0, 10.0);
    CHECK(baddeley_metric(a, b) == Approx(bem_oracle(a, b, 2.0, c)).epsilon(1e-12));
    CHECK(baddeley_metric(a, b, 1.0, 4.0) == Approx(bem_oracle(a, b, 1.0, 4.0)).epsilon(1e-12));

    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const EdgeMap x = random_map(12, 10, 0.1, rng);
        const EdgeMap y = random_map(12, 10, 0.1, rng);
        const double d = baddeley_metric(x, y);
        CHECK(d == Approx(baddeley_metric(y, x)));
        CHECK(d >= 0.0);
        CHECK(d <= 1.0);
        CHECK(baddeley_metric(x, x) == 0.0);
    }
    CHECK_THROWS_AS(baddeley_metric(EdgeMap(3, 3), EdgeMap(4, 3)), InvalidArgument);
}

TEST_CASE("Baddeley metric with an empty map stays finite") {
    EdgeMap a(8, 8), empty(8, 8);
    a.set(2, 2);
    const double d = baddeley_metric(a, empty);
    CHECK(std::isfinite(d));
    CHECK(d > 0.0);
    CHECK(d <= 1.0);
}

TEST_CASE("ESI from entropy") {
    const double mu = 50.0;
    const double h = 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * mu * mu);
    CHECK(esi_from_entropy(h, mu) == Approx(0.5));
    CHECK(esi_from_entropy(-50.0, mu) == Approx(1.0));
    double prev = 2.0;
    for (double e = -2.0; e < 8.0; e += 0.5) {
        const double a = esi_from_entropy(e, mu);
        CHECK(a < prev);
        prev = a;
    }
}

TEST_CASE("edge maps survive the PGM convention") {
    std::mt19937_64 rng(10);
    const EdgeMap m = random_map(7, 5, 0.3, rng);
    const GrayImage img = edge_map_to_image(m);
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 7; ++x) CHECK(img(x, y) == (m.at(x, y) ? 0.0 : 255.0));
    CHECK(edge_map_from_image(img) == m);
}

TEST_CASE("ground truth marks the bright side") {
    const EdgeMap gt = boundary_ground_truth(synth_step_edge(10, 4, 10.0, 90.0, 5));
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 10; ++x) CHECK(gt.at(x, y) == (x == 5));
}

TEST_CASE("compensation reduces the ESI error on noisy steps") {
    for (double snr_db : {10.0, 15.0, 20.0}) {
        CAPTURE(snr_db);
        double before = 0.0, after = 0.0;
        for (unsigned long long seed = 0; seed < 5; ++seed) {
            const GrayImage clean = synth_step_edge(32, 32, 60.0, 180.0, 16);
            const double var_s = variance(clean.pixels());
            const double var_n = var_s / std::pow(10.0, snr_db / 10.0);
            const GrayImage noisy = add_noise(clean, NoiseSpec{var_n, seed});
            const ESIMap truth = esi_map(clean);
            const ESIMap raw = esi_map(noisy);
            const ESIMap comp = compensate_esi(raw, var_s / (var_s + var_n));
            for (std::size_t i = 0; i < truth.values.size(); ++i) {
                before += std::abs(raw.values[i] - truth.values[i]);
                after += std::abs(comp.values[i] - truth.values[i]);
            }
        }
        CHECK(after < before);
    }
}
