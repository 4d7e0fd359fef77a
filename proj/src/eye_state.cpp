#include "ocular/eye_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ocular {

std::string state_name(EyeState s) {
    switch (s) {
        case EyeState::Open: return "open";
        case EyeState::PartiallyClosed: return "partial";
        case EyeState::Closed: return "closed";
    }
    return "?";
}

EyeState parse_state(const std::string& name) {
    if (name == "open") return EyeState::Open;
    if (name == "partial" || name == "partially-closed") return EyeState::PartiallyClosed;
    if (name == "closed") return EyeState::Closed;
    throw InvalidArgument("unknown eye state '" + name + "'");
}

std::string domain_name(TransformDomain d) { return d == TransformDomain::DCT ? "dct" : "dft"; }

TransformDomain parse_domain(const std::string& name) {
    if (name == "dct") return TransformDomain::DCT;
    if (name == "dft") return TransformDomain::DFT;
    throw InvalidArgument("unknown transform domain '" + name + "'");
}

std::vector<Complex> forward_transform(const GrayImage& img, TransformDomain domain) {
    if (domain == TransformDomain::DCT) {
        const auto X = dct2(img.pixels(), img.height(), img.width());
        return {X.begin(), X.end()};
    }
    std::vector<Complex> x(img.pixels().begin(), img.pixels().end());
    return dft2(x, img.height(), img.width());
}

FilterBank synthesize_otmach(const TrainingSet& train, const OtMachParams& params, TransformDomain domain) {
    if (params.a < 0.0 || params.b < 0.0 || params.c < 0.0 || params.a + params.b + params.c <= 0.0)
        throw InvalidArgument("OT-MACH trade-off parameters must be non-negative and not all zero");
    if (params.sigma2 < 0.0 || params.epsilon <= 0.0) throw InvalidArgument("sigma2 >= 0 and epsilon > 0 required");
    if (train.empty()) throw InvalidArgument("synthesize_otmach: no classes");

    FilterBank bank;
    bank.domain = domain;
    bank.params = params;
    bank.rows = train.front().second.empty() ? 0 : train.front().second.front().height();
    bank.cols = train.front().second.empty() ? 0 : train.front().second.front().width();

    for (const auto& [state, images] : train) {
        if (images.size() < 2) throw InvalidArgument("synthesize_otmach: need at least 2 training images per class");
        const std::size_t mn = static_cast<std::size_t>(bank.rows) * bank.cols;
        std::vector<std::vector<Complex>> X;
        X.reserve(images.size());
        for (const auto& img : images) {
            if (img.height() != bank.rows || img.width() != bank.cols)
                throw InvalidArgument("synthesize_otmach: training images differ in size");
            X.push_back(forward_transform(img, domain));
        }
        const double n = static_cast<double>(images.size());
        ClassFilter f;
        f.state = state;
        f.training_count = static_cast<int>(images.size());
        f.mean.assign(mn, Complex{});
        f.var.assign(mn, 0.0);
        f.h.assign(mn, Complex{});
        std::vector<double> power(mn, 0.0);
        for (const auto& x : X) {
            for (std::size_t k = 0; k < mn; ++k) {
                f.mean[k] += x[k] / n;
                power[k] += std::norm(x[k]) / n;
            }
        }
        for (const auto& x : X)
            for (std::size_t k = 0; k < mn; ++k) f.var[k] += std::norm(x[k] - f.mean[k]) / n;

        std::size_t regularized = 0;
        for (std::size_t k = 0; k < mn; ++k) {
            double denom = params.a * params.sigma2 + params.b * power[k] + params.c * f.var[k];
            if (denom < params.epsilon) {
                denom = params.epsilon;
                ++regularized;
            }
            f.h[k] = f.mean[k] / denom;
        }
        if (regularized > 0)
            bank.diagnostics.push_back("class " + state_name(state) + ": " + std::to_string(regularized) +
                                       " zero-denominator coefficients regularized");
        bank.classes.push_back(std::move(f));
    }
    return bank;
}

CorrelationSurface correlate(const GrayImage& test, const ClassFilter& filter, TransformDomain domain) {
    const int rows = test.height();
    const int cols = test.width();
    const std::size_t mn = static_cast<std::size_t>(rows) * cols;
    if (filter.h.size() != mn) throw InvalidArgument("correlate: test shape does not match filter");
    CorrelationSurface s{rows, cols, std::vector<double>(mn)};
    const auto T = forward_transform(test, domain);
    if (domain == TransformDomain::DCT) {
        std::vector<double> prod(mn);
        for (std::size_t k = 0; k < mn; ++k) prod[k] = T[k].real() * filter.h[k].real();
        s.values = idct2(prod, rows, cols);
    } else {
        std::vector<Complex> prod(mn);
        for (std::size_t k = 0; k < mn; ++k) prod[k] = T[k] * std::conj(filter.h[k]);
        const auto g = idft2(prod, rows, cols);
        for (std::size_t k = 0; k < mn; ++k) s.values[k] = g[k].real();
    }
    return s;
}

std::vector<double> dct_modulation_kernel(int n) {
    // z(i) = N^(-3/2) / 4 * [1 + 2 sqrt(2) sum_{k=1}^{N-1} cos(pi k (2i - 1) / 2N)], period 2N.
    std::vector<double> z(2 * static_cast<std::size_t>(n));
    const double pre = std::pow(static_cast<double>(n), -1.5) / 4.0;
    for (int i = 0; i < 2 * n; ++i) {
        double acc = 0.0;
        for (int k = 1; k < n; ++k) acc += std::cos(std::numbers::pi * k * (2.0 * i - 1.0) / (2.0 * n));
        z[i] = pre * (1.0 + 2.0 * std::numbers::sqrt2 * acc);
    }
    return z;
}

namespace {

// Whole-sample-shifted symmetric extension: e(-1 - m) = x(m), period 2n.
int reflect(int i, int n) {
    const int p = ((i % (2 * n)) + 2 * n) % (2 * n);
    return p < n ? p : 2 * n - 1 - p;
}

}  // namespace

CorrelationSurface dct_spatial_equivalent(const GrayImage& test, const GrayImage& spatial_filter) {
    const int M = test.height();
    const int N = test.width();
    if (spatial_filter.height() != M || spatial_filter.width() != N)
        throw InvalidArgument("dct_spatial_equivalent: shape mismatch");
    const int P = 2 * M;
    const int Q = 2 * N;
    // u = x_ext (*) h_ext over the 2M x 2N torus.
    std::vector<double> u(static_cast<std::size_t>(P) * Q, 0.0);
    for (int i = 0; i < P; ++i) {
        for (int j = 0; j < Q; ++j) {
            double acc = 0.0;
            for (int a = 0; a < P; ++a) {
                for (int b = 0; b < Q; ++b) {
                    const double xe = test(reflect(b, N), reflect(a, M));
                    const double he = spatial_filter(reflect(j - b, N), reflect(i - a, M));
                    acc += xe * he;
                }
            }
            u[static_cast<std::size_t>(i) * Q + j] = acc;
        }
    }
    const auto zm = dct_modulation_kernel(M);
    const auto zn = dct_modulation_kernel(N);
    CorrelationSurface s{M, N, std::vector<double>(static_cast<std::size_t>(M) * N)};
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < N; ++j) {
            double acc = 0.0;
            for (int a = 0; a < P; ++a)
                for (int b = 0; b < Q; ++b)
                    acc += u[static_cast<std::size_t>(a) * Q + b] * zm[((i - a) % P + P) % P] * zn[((j - b) % Q + Q) % Q];
            s.values[static_cast<std::size_t>(i) * N + j] = acc;
        }
    }
    return s;
}

double psr(const CorrelationSurface& surface) {
    if (surface.rows < 20 || surface.cols < 20) throw InvalidArgument("psr: surface must be at least 20x20");
    const auto it = std::max_element(surface.values.begin(), surface.values.end());
    const auto idx = static_cast<int>(it - surface.values.begin());
    const int pr = idx / surface.cols;
    const int pc = idx % surface.cols;
    double sum = 0.0;
    double sum_sq = 0.0;
    int count = 0;
    for (int dr = -10; dr < 10; ++dr) {
        for (int dc = -10; dc < 10; ++dc) {
            if (std::abs(dr) <= 2 && std::abs(dc) <= 2) continue;
            const int r = ((pr + dr) % surface.rows + surface.rows) % surface.rows;
            const int c = ((pc + dc) % surface.cols + surface.cols) % surface.cols;
            const double v = surface.at(r, c);
            sum += v;
            sum_sq += v * v;
            ++count;
        }
    }
    const double mu = sum / count;
    const double var = std::max(sum_sq / count - mu * mu, 0.0);
    // Relative floor so rounding on a constant surface still reads as zero.
    if (var <= 1e-24 * std::max(1.0, mu * mu)) return std::numeric_limits<double>::infinity();
    return (*it - mu) / std::sqrt(var);
}

namespace {

std::vector<int> bin256(const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    std::vector<int> bins(v.size(), 0);
    const double range = *hi - *lo;
    if (range <= 0.0) return bins;
    for (std::size_t i = 0; i < v.size(); ++i)
        bins[i] = std::min(255, static_cast<int>((v[i] - *lo) / range * 256.0));
    return bins;
}

double entropy(const std::vector<double>& counts, double total) {
    double h = 0.0;
    for (double c : counts)
        if (c > 0.0) h -= (c / total) * std::log(c / total);
    return h;
}

}  // namespace

double mutual_information(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.empty()) throw InvalidArgument("mutual_information: size mismatch");
    const auto ba = bin256(a);
    const auto bb = bin256(b);
    std::vector<double> ha(256, 0.0), hb(256, 0.0), joint(256 * 256, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        ha[ba[i]] += 1.0;
        hb[bb[i]] += 1.0;
        joint[static_cast<std::size_t>(ba[i]) * 256 + bb[i]] += 1.0;
    }
    const double n = static_cast<double>(a.size());
    const double hj = entropy(joint, n);
    if (hj <= 0.0) return 0.0;
    return (entropy(ha, n) + entropy(hb, n)) / hj;
}

double mutual_information(const GrayImage& a, const CorrelationSurface& b) {
    if (a.width() != b.cols || a.height() != b.rows) throw InvalidArgument("mutual_information: shape mismatch");
    return mutual_information(a.pixels(), b.values);
}

double fisher_ratio(const std::vector<Complex>& t, const std::vector<Complex>& m, const std::vector<double>& var,
                    double epsilon) {
    if (t.size() != m.size() || t.size() != var.size()) throw InvalidArgument("fisher_ratio: size mismatch");
    double fr = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) fr += std::norm(m[k] - t[k]) / std::max(var[k], epsilon);
    return fr;
}

Classification decide(ClassificationScores scores) {
    const auto& pc = scores.per_class;
    if (pc.empty()) throw InvalidArgument("classify: empty filter bank");
    std::size_t by_psr = 0, by_mi = 0, by_fr = 0;
    for (std::size_t i = 1; i < pc.size(); ++i) {
        if (pc[i].psr > pc[by_psr].psr) by_psr = i;
        if (pc[i].mi > pc[by_mi].mi) by_mi = i;
        if (pc[i].fr < pc[by_fr].fr) by_fr = i;
    }
    std::size_t winner = by_psr;
    if (by_mi == by_fr) winner = by_mi;
    else if (by_psr != by_mi && by_psr != by_fr) scores.fell_back_to_psr = true;
    if (scores.fell_back_to_psr) scores.diagnostics.push_back("three-way vote split; PSR decides");
    Classification out;
    out.state = pc[winner].state;
    out.scores = std::move(scores);
    return out;
}

Classification classify(const GrayImage& test, const FilterBank& bank) {
    if (test.height() != bank.rows || test.width() != bank.cols)
        throw InvalidArgument("classify: test image does not match the bank shape");
    const auto T = forward_transform(test, bank.domain);
    ClassificationScores scores;
    for (const auto& f : bank.classes) {
        const CorrelationSurface s = correlate(test, f, bank.domain);
        scores.per_class.push_back({f.state, psr(s), mutual_information(test, s),
                                    fisher_ratio(T, f.mean, f.var, bank.params.epsilon)});
    }
    return decide(std::move(scores));
}

}  // namespace ocular
