#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "../support/corpus.hpp"
#include "ocular/decorrelation.hpp"
#include "ocular/eigen_eye.hpp"
#include "ocular/eye_state.hpp"
#include "ocular/filter_bank_io.hpp"
#include "ocular/transforms.hpp"

using namespace ocular;
using doctest::Approx;

namespace {

GrayImage random_image(int w, int h, std::mt19937_64& rng, double hi = 255.0) {
    std::uniform_real_distribution<double> u(0.0, hi);
    GrayImage img(w, h);
    for (double& p : img.pixels()) p = u(rng);
    return img;
}

ClassFilter spatial_dct_filter(const GrayImage& f) {
    ClassFilter cf;
    for (double h : dct2(f.pixels(), f.height(), f.width())) cf.h.emplace_back(h, 0.0);
    return cf;
}

TrainingSet split_corpus(const std::vector<testing::LabelledImage>& corpus) {
    TrainingSet train;
    for (EyeState s : {EyeState::Open, EyeState::PartiallyClosed, EyeState::Closed}) {
        std::vector<GrayImage> imgs;
        for (const auto& li : corpus)
            if (li.state == s) imgs.push_back(li.image);
        train.emplace_back(s, std::move(imgs));
    }
    return train;
}

ClassScores scores(EyeState s, double psr, double mi, double fr) { return {s, psr, mi, fr}; }

}  // namespace

TEST_CASE("DCT and DFT round trips") {
    std::mt19937_64 rng(1);
    const GrayImage img = random_image(6, 5, rng);
    const auto back = idct2(dct2(img.pixels(), 5, 6), 5, 6);
    for (std::size_t i = 0; i < back.size(); ++i) CHECK(back[i] == Approx(img.pixels()[i]));
    std::vector<Complex> c(img.pixels().begin(), img.pixels().end());
    const auto cb = idft2(dft2(c, 5, 6), 5, 6);
    for (std::size_t i = 0; i < cb.size(); ++i) CHECK(cb[i].real() == Approx(img.pixels()[i]));

    // Unitary matrices.
    const Eigen::MatrixXd d = dct_matrix(7);
    CHECK((d * d.transpose() - Eigen::MatrixXd::Identity(7, 7)).norm() < 1e-12);
    const Eigen::MatrixXcd f = dft_matrix(7);
    CHECK((f * f.adjoint() - Eigen::MatrixXcd::Identity(7, 7)).norm() < 1e-12);
}

TEST_CASE("DCT path equals the spatial construction") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 10; ++t) {
        const GrayImage test = random_image(8, 8, rng);
        const GrayImage filt = random_image(8, 8, rng, 1.0);
        const CorrelationSurface a = correlate(test, spatial_dct_filter(filt), TransformDomain::DCT);
        const CorrelationSurface b = dct_spatial_equivalent(test, filt);
        for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == Approx(b.values[i]).scale(1.0).epsilon(1e-9));
    }
    // Non-square shapes go through the same identity.
    const GrayImage test = random_image(6, 4, rng);
    const GrayImage filt = random_image(6, 4, rng, 1.0);
    const CorrelationSurface a = correlate(test, spatial_dct_filter(filt), TransformDomain::DCT);
    const CorrelationSurface b = dct_spatial_equivalent(test, filt);
    for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(std::abs(a.values[i] - b.values[i]) < 1e-9);
}

TEST_CASE("correlation of zeros and of the matched template") {
    std::mt19937_64 rng(3);
    const GrayImage tmpl = random_image(8, 8, rng);
    ClassFilter cf;
    cf.h = forward_transform(tmpl, TransformDomain::DFT);
    const CorrelationSurface s = correlate(tmpl, cf, TransformDomain::DFT);
    CHECK(std::max_element(s.values.begin(), s.values.end()) == s.values.begin());
    const CorrelationSurface z = correlate(GrayImage(8, 8), cf, TransformDomain::DFT);
    for (double v : z.values) CHECK(v == Approx(0.0).scale(1.0));
    CHECK_THROWS_AS(correlate(GrayImage(4, 4), cf, TransformDomain::DFT), InvalidArgument);
}

TEST_CASE("PSR on a constructed surface") {
    CorrelationSurface s{20, 20, std::vector<double>(400, 1.0)};
    const double a = std::sqrt(0.25 * 375.0 / 300.0);
    int k = 0;
    for (int r = 0; r < 20; ++r)
        for (int c = 0; c < 20; ++c) {
            if (std::abs(r - 10) <= 2 && std::abs(c - 10) <= 2) continue;
            s.values[r * 20 + c] = 1.0 + (k < 150 ? a : k < 300 ? -a : 0.0);
            ++k;
        }
    s.values[10 * 20 + 10] = 10.0;
    CHECK(psr(s) == Approx(18.0));
    CorrelationSurface shifted = s;
    for (double& v : shifted.values) v += 37.0;
    CHECK(psr(shifted) == Approx(18.0));
    CHECK(std::isinf(psr(CorrelationSurface{20, 20, std::vector<double>(400, 3.0)})));
    CHECK_THROWS_AS(psr(CorrelationSurface{10, 10, std::vector<double>(100, 3.0)}), InvalidArgument);
}

TEST_CASE("mutual information") {
    std::mt19937_64 rng(4);
    // 512 x 512 keeps the plug-in bias of the 256-bin joint histogram small.
    const GrayImage a = random_image(512, 512, rng);
    const GrayImage b = random_image(512, 512, rng);
    CHECK(mutual_information(a.pixels(), a.pixels()) == Approx(2.0));
    CHECK(mutual_information(a.pixels(), b.pixels()) == Approx(1.0).epsilon(0.05));
    const GrayImage small = random_image(30, 30, rng);
    const GrayImage other = random_image(30, 30, rng);
    CHECK(mutual_information(small.pixels(), other.pixels()) ==
          Approx(mutual_information(other.pixels(), small.pixels())));
    const std::vector<double> flat(100, 5.0);
    CHECK(mutual_information(flat, flat) == 0.0);
}

TEST_CASE("Fisher ratio") {
    const std::vector<Complex> mean{Complex(4.0, 0.0)};
    CHECK(fisher_ratio({Complex(2.0, 0.0)}, mean, {1.0}) == Approx(4.0));
    CHECK(fisher_ratio(mean, mean, {1.0}) == 0.0);
    CHECK(fisher_ratio({Complex(0.0, 0.0)}, mean, {1.0}) ==
          Approx(4.0 * fisher_ratio({Complex(2.0, 0.0)}, mean, {1.0})));
    CHECK(std::isfinite(fisher_ratio({Complex(2.0, 0.0)}, mean, {0.0})));
}

TEST_CASE("two-of-three vote") {
    using S = EyeState;
    ClassificationScores agree{{scores(S::Open, 9, 1.5, 1), scores(S::PartiallyClosed, 3, 1.2, 5),
                                scores(S::Closed, 2, 1.1, 7)}, false, {}};
    CHECK(decide(agree).state == S::Open);

    ClassificationScores mi_dissents{{scores(S::Open, 9, 1.1, 1), scores(S::PartiallyClosed, 3, 1.9, 5),
                                      scores(S::Closed, 2, 1.2, 7)}, false, {}};
    const Classification c = decide(mi_dissents);
    CHECK(c.state == S::Open);
    CHECK_FALSE(c.scores.fell_back_to_psr);

    ClassificationScores psr_dissents{{scores(S::Open, 9, 1.1, 6), scores(S::PartiallyClosed, 3, 1.9, 1),
                                       scores(S::Closed, 2, 1.2, 7)}, false, {}};
    CHECK(decide(psr_dissents).state == S::PartiallyClosed);

    ClassificationScores split{{scores(S::Open, 9, 1.1, 6), scores(S::PartiallyClosed, 3, 1.9, 4),
                                scores(S::Closed, 2, 1.2, 1)}, false, {}};
    const Classification f = decide(split);
    CHECK(f.state == S::Open);
    CHECK(f.scores.fell_back_to_psr);
    CHECK_FALSE(f.scores.diagnostics.empty());
}

TEST_CASE("OT-MACH bank on a synthetic corpus") {
    const auto corpus = testing::state_corpus(6, 20.0, 12);
    const TrainingSet train = split_corpus(corpus);
    for (TransformDomain d : {TransformDomain::DCT, TransformDomain::DFT}) {
        CAPTURE(domain_name(d));
        const FilterBank bank = synthesize_otmach(train, {}, d);
        CHECK(bank.classes.size() == 3);
        CHECK(bank.rows == 25);
        CHECK(bank.cols == 50);
        int own = 0;
        for (const auto& li : corpus) own += classify(li.image, bank).state == li.state;
        CHECK(own >= 17);
    }
    // Matched class peaks at the origin on the DCT path.
    const FilterBank bank = synthesize_otmach(train);
    for (const auto& [state, imgs] : train) {
        const ClassFilter& f = *std::find_if(bank.classes.begin(), bank.classes.end(),
                                             [&](const ClassFilter& c) { return c.state == state; });
        for (const GrayImage& img : imgs) {
            const CorrelationSurface s = correlate(img, f, TransformDomain::DCT);
            CHECK(std::max_element(s.values.begin(), s.values.end()) == s.values.begin());
        }
    }
}

TEST_CASE("OT-MACH preconditions and the regularization flag") {
    std::mt19937_64 rng(5);
    const GrayImage img = random_image(8, 8, rng);
    TrainingSet same{{EyeState::Open, {img, img}}, {EyeState::Closed, {img, img}}};
    OtMachParams p;
    p.a = 0.0;
    p.b = 0.0;
    p.c = 1.0;
    CHECK_FALSE(synthesize_otmach(same, p).diagnostics.empty());

    TrainingSet one{{EyeState::Open, {img}}};
    CHECK_THROWS_AS(synthesize_otmach(one), InvalidArgument);
    TrainingSet mixed{{EyeState::Open, {img, GrayImage(4, 4)}}};
    CHECK_THROWS_AS(synthesize_otmach(mixed), InvalidArgument);
    p.c = 0.0;
    CHECK_THROWS_AS(synthesize_otmach(same, p), InvalidArgument);
}

TEST_CASE("filter bank files round trip") {
    const auto corpus = testing::state_corpus(3, 20.0, 4, 24, 12);
    const FilterBank bank = synthesize_otmach(split_corpus(corpus), {}, TransformDomain::DFT);
    const auto path = std::filesystem::temp_directory_path() / "ocular_bank_test.json";
    save_filter_bank(bank, path);
    const FilterBank back = load_filter_bank(path);
    CHECK(back.domain == bank.domain);
    CHECK(back.rows == bank.rows);
    REQUIRE(back.classes.size() == bank.classes.size());
    for (std::size_t i = 0; i < bank.classes.size(); ++i) {
        CHECK(back.classes[i].state == bank.classes[i].state);
        CHECK(back.classes[i].h == bank.classes[i].h);
        CHECK(back.classes[i].mean == bank.classes[i].mean);
        CHECK(back.classes[i].var == bank.classes[i].var);
    }
    std::filesystem::remove(path);
    std::filesystem::remove(path.parent_path() / "ocular_bank_test.bin");
}

TEST_CASE("eigen-eye model against a direct eigendecomposition") {
    std::mt19937_64 rng(6);
    std::vector<GrayImage> imgs;
    for (int i = 0; i < 4; ++i) imgs.push_back(random_image(6, 6, rng));
    const EigenEyeModel m = esd_train({{EyeState::Open, imgs}}, 3);
    const EigenEyeClass& c = m.classes.at(0);
    REQUIRE(c.eigenvectors.cols() == 3);
    const Eigen::MatrixXd gram = c.eigenvectors.transpose() * c.eigenvectors;
    CHECK((gram - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-9);

    Eigen::MatrixXd a(36, 4);
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 36; ++k) a(k, i) = imgs[i].pixels()[k] - c.mean(k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> direct(a * a.transpose());
    for (int j = 0; j < 3; ++j) {
        const Eigen::VectorXd u = direct.eigenvectors().col(35 - j);
        CHECK(std::abs(std::abs(u.dot(c.eigenvectors.col(j))) - 1.0) < 1e-9);
        CHECK(c.eigenvalues(j) == Approx(direct.eigenvalues()(35 - j)));
    }
}

TEST_CASE("eigen-eye classification") {
    std::mt19937_64 rng(7);
    std::vector<GrayImage> dark, bright;
    for (int i = 0; i < 4; ++i) {
        dark.push_back(random_image(6, 6, rng, 60.0));
        GrayImage b = random_image(6, 6, rng, 60.0);
        for (double& p : b.pixels()) p += 180.0;
        bright.push_back(b);
    }
    const EigenEyeModel m = esd_train({{EyeState::Open, dark}, {EyeState::Closed, bright}}, 3);
    GrayImage mean_img(6, 6);
    for (int k = 0; k < 36; ++k) mean_img.pixels()[k] = m.classes[1].mean(k);
    const EsdResult r = esd_classify(mean_img, m);
    CHECK(r.state == EyeState::Closed);
    CHECK(r.errors[1] == Approx(0.0).scale(1.0));
    for (const GrayImage& img : dark) CHECK(esd_classify(img, m).state == EyeState::Open);

    // Reconstruction error shrinks as more eigen-eyes are kept.
    double prev = 1e300;
    for (int k = 1; k <= 3; ++k) {
        const EigenEyeModel mk = esd_train({{EyeState::Open, dark}}, k);
        const double e = esd_classify(dark[0], mk).errors[0];
        CHECK(e <= prev + 1e-9);
        prev = e;
    }

    const EigenEyeModel flat = esd_train({{EyeState::Open, {dark[0], dark[0]}}}, 2);
    CHECK_FALSE(flat.diagnostics.empty());
}

TEST_CASE("Markov-1 decorrelation") {
    for (TransformDomain d : {TransformDomain::DCT, TransformDomain::DFT}) {
        const Eigen::MatrixXd white = markov1_decorrelation(0.0, 8, d);
        CHECK((white - Eigen::MatrixXd::Identity(8, 8)).norm() < 1e-12);
        const Eigen::MatrixXd m = markov1_decorrelation(0.9, 16, d);
        for (int i = 0; i < 16; ++i) CHECK(m(i, i) == Approx(1.0));
    }
    for (double rho : {0.9, 0.95, 0.99})
        for (int n : {16, 64}) {
            CAPTURE(rho);
            CAPTURE(n);
            CHECK(mean_off_diagonal(markov1_decorrelation(rho, n, TransformDomain::DCT)) <
                  mean_off_diagonal(markov1_decorrelation(rho, n, TransformDomain::DFT)));
        }
    CHECK_THROWS_AS(markov1_decorrelation(1.5, 8, TransformDomain::DCT), InvalidArgument);
}

TEST_CASE("state and domain names round trip") {
    for (EyeState s : {EyeState::Open, EyeState::PartiallyClosed, EyeState::Closed})
        CHECK(parse_state(state_name(s)) == s);
    for (TransformDomain d : {TransformDomain::DCT, TransformDomain::DFT}) CHECK(parse_domain(domain_name(d)) == d);
    CHECK_THROWS_AS(parse_state("squint"), InvalidArgument);
}
