#include "ocular/edges.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace ocular {

std::size_t EdgeMap::count() const { return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), 1)); }

void validate(const EdgeParams& p) {
    if (!(p.alpha_low >= 0.5 && p.alpha_low < p.alpha_high && p.alpha_high <= 1.0))
        throw InvalidArgument("edge band must satisfy 0.5 <= alpha_low < alpha_high <= 1");
    if (p.esi_window < 3 || p.esi_window % 2 == 0) throw InvalidArgument("esi_window must be odd and >= 3");
    if (p.nms_window < 3 || p.nms_window % 2 == 0) throw InvalidArgument("nms_window must be odd and >= 3");
    if (p.stvr_mode == StvrMode::Explicit && !(p.stvr_value >= 0.0 && p.stvr_value <= 1.0))
        throw InvalidArgument("explicit STVR must be in [0, 1]");
    if (p.black_level_window < 1) throw InvalidArgument("black_level_window must be >= 1");
}

ESIMap esi_map(const GrayImage& img, int window) {
    if (window < 3 || window % 2 == 0) throw InvalidArgument("esi_map: window must be odd and >= 3");
    if (img.empty()) throw InvalidArgument("esi_map: empty image");
    ESIMap map{img.width(), img.height(), window, std::vector<double>(img.size())};
    const int half = window / 2;
    const double n = static_cast<double>(window) * window;
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            double sum = 0.0;
            double sum_sq = 0.0;
            for (int dy = -half; dy <= half; ++dy) {
                for (int dx = -half; dx <= half; ++dx) {
                    const double v = img.clamped(x + dx, y + dy);
                    sum += v;
                    sum_sq += v * v;
                }
            }
            const double alpha = sum_sq == 0.0 ? 1.0 : (sum * sum) / (n * sum_sq);
            map.at(x, y) = std::clamp(alpha, 1.0 / n, 1.0);
        }
    }
    return map;
}

namespace {

double compensate_one(double alpha_g, double stvr, double n) {
    const double inv_sq = stvr * (1.0 / (alpha_g * alpha_g) - 1.0) + 1.0;
    return std::clamp(1.0 / std::sqrt(inv_sq), 1.0 / n, 1.0);
}

}  // namespace

ESIMap compensate_esi(const ESIMap& esi_g, double stvr) {
    if (!(stvr >= 0.0 && stvr <= 1.0)) throw InvalidArgument("compensate_esi: STVR must be in [0, 1]");
    ESIMap out = esi_g;
    const double n = static_cast<double>(esi_g.window) * esi_g.window;
    for (double& a : out.values) a = compensate_one(a, stvr, n);
    return out;
}

ESIMap compensate_esi_local(const ESIMap& esi_g, const GrayImage& img, double sigma_n2) {
    if (img.width() != esi_g.width || img.height() != esi_g.height)
        throw InvalidArgument("compensate_esi_local: shape mismatch");
    if (sigma_n2 < 0.0) throw InvalidArgument("compensate_esi_local: noise variance must be >= 0");
    ESIMap out = esi_g;
    const int half = esi_g.window / 2;
    const double n = static_cast<double>(esi_g.window) * esi_g.window;
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            double sum = 0.0;
            double sum_sq = 0.0;
            for (int dy = -half; dy <= half; ++dy) {
                for (int dx = -half; dx <= half; ++dx) {
                    const double v = img.clamped(x + dx, y + dy);
                    sum += v;
                    sum_sq += v * v;
                }
            }
            const double m = sum / n;
            const double var = std::max(sum_sq / n - m * m, 0.0);
            const double stvr = var > 0.0 ? std::clamp(1.0 - sigma_n2 / var, 0.0, 1.0) : 1.0;
            out.at(x, y) = compensate_one(esi_g.at(x, y), stvr, n);
        }
    }
    return out;
}

ESIMap nms_min(const ESIMap& esi, int window, double response_floor) {
    if (window < 3 || window % 2 == 0) throw InvalidArgument("nms_min: window must be odd and >= 3");
    static constexpr std::array<std::array<int, 2>, 4> kDirs{{{1, 0}, {1, 1}, {0, 1}, {-1, 1}}};
    // Perpendicular of 0/45/90/135 degrees is 90/135/0/45.
    static constexpr std::array<int, 4> kPerp{2, 3, 0, 1};
    const int half = window / 2;
    const int w = esi.width;
    const int h = esi.height;
    auto inside = [&](int x, int y) { return x >= 0 && y >= 0 && x < w && y < h; };

    ESIMap out = esi;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double a = esi.at(x, y);
            if (a < response_floor || a >= 1.0) continue;

            int best_dir = 0;
            double best_var = std::numeric_limits<double>::infinity();
            for (int d = 0; d < 4; ++d) {
                double sum = 0.0;
                double sum_sq = 0.0;
                int count = 0;
                for (int t = -half; t <= half; ++t) {
                    const int xx = x + t * kDirs[d][0];
                    const int yy = y + t * kDirs[d][1];
                    if (!inside(xx, yy)) continue;
                    const double v = esi.at(xx, yy);
                    sum += v;
                    sum_sq += v * v;
                    ++count;
                }
                const double m = sum / count;
                const double var = sum_sq / count - m * m;
                if (var < best_var - 1e-15) {
                    best_var = var;
                    best_dir = d;
                }
            }

            // Every direction steps forward in row-major order, so the first
            // minimum met along the line is the lexicographically first one.
            const int sx = kDirs[kPerp[best_dir]][0];
            const int sy = kDirs[kPerp[best_dir]][1];
            int keep_x = -1;
            int keep_y = -1;
            double keep = std::numeric_limits<double>::infinity();
            for (int t = -half; t <= half; ++t) {
                const int xx = x + t * sx;
                const int yy = y + t * sy;
                if (!inside(xx, yy)) continue;
                const double v = esi.at(xx, yy);
                if (v < response_floor) continue;
                if (v < keep) {
                    keep = v;
                    keep_x = xx;
                    keep_y = yy;
                }
            }
            if (keep_x != x || keep_y != y) out.at(x, y) = 1.0;
        }
    }
    return out;
}

EdgeMap threshold_edges(const ESIMap& esi, const EdgeParams& params) {
    EdgeMap map(esi.width, esi.height);
    for (std::size_t i = 0; i < esi.values.size(); ++i) {
        const double a = esi.values[i];
        map.bits[i] = (a >= params.alpha_low && a <= params.alpha_high) ? 1 : 0;
    }
    return map;
}

namespace {

// Smallest and largest mean over all fully-contained window x window boxes.
std::pair<double, double> box_mean_extremes(const GrayImage& img, int window) {
    if (window > img.width() || window > img.height()) {
        const auto [lo, hi] = std::minmax_element(img.pixels().begin(), img.pixels().end());
        return {*lo, *hi};
    }
    const int w = img.width();
    const int h = img.height();
    std::vector<double> integral(static_cast<std::size_t>(w + 1) * (h + 1), 0.0);
    auto I = [&](int x, int y) -> double& { return integral[static_cast<std::size_t>(y) * (w + 1) + x]; };
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) I(x + 1, y + 1) = img(x, y) + I(x, y + 1) + I(x + 1, y) - I(x, y);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int y = 0; y + window <= h; ++y) {
        for (int x = 0; x + window <= w; ++x) {
            const double s = I(x + window, y + window) - I(x, y + window) - I(x + window, y) + I(x, y);
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
    }
    const double area = static_cast<double>(window) * window;
    return {lo / area, hi / area};
}

}  // namespace

double black_level(const GrayImage& img, int window) {
    if (img.empty()) throw InvalidArgument("black_level: empty image");
    return box_mean_extremes(img, window).first;
}

double strongest_step_alpha(double ratio, int window) {
    if (!(ratio >= 1.0)) throw InvalidArgument("strongest_step_alpha: ratio must be >= 1");
    if (std::isinf(ratio)) return 1.0 / window;
    const double w = window;
    return (ratio + w - 1.0) * (ratio + w - 1.0) / (w * (ratio * ratio + w - 1.0));
}

EdgeDetection detect_edges_full(const GrayImage& img, const EdgeParams& params) {
    validate(params);
    if (img.empty()) throw InvalidArgument("detect_edges: empty image");
    EdgeDetection det;
    GrayImage work = img;
    if (params.remove_black_level) {
        const auto [lo, hi] = box_mean_extremes(img, params.black_level_window);
        const double ratio = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
        if (lo > 0.0 && strongest_step_alpha(ratio, params.esi_window) > params.alpha_high) {
            det.black_level = lo;
            work = offset_intensity(img, -lo);
            det.diagnostics.push_back("black level " + std::to_string(lo) + " removed (intensity range too narrow)");
        }
    }
    const ESIMap raw = esi_map(work, params.esi_window);

    switch (params.stvr_mode) {
        case StvrMode::Off: det.esi = raw; break;
        case StvrMode::Explicit:
            det.stvr = params.stvr_value;
            det.esi = compensate_esi(raw, det.stvr);
            break;
        case StvrMode::Global:
        case StvrMode::Local: {
            const VarianceEstimate est = estimate_variance(work, params.stvr_method);
            const NoiseRatio stvr = estimate_stvr(est);
            det.diagnostics.insert(det.diagnostics.end(), est.diagnostics.begin(), est.diagnostics.end());
            det.diagnostics.insert(det.diagnostics.end(), stvr.diagnostics.begin(), stvr.diagnostics.end());
            det.stvr = stvr.value;
            det.esi = params.stvr_mode == StvrMode::Global ? compensate_esi(raw, det.stvr)
                                                           : compensate_esi_local(raw, work, est.sigma_n2);
            break;
        }
    }
    det.suppressed = nms_min(det.esi, params.nms_window, params.alpha_low);
    det.edges = threshold_edges(det.suppressed, params);
    return det;
}

EdgeMap detect_edges(const GrayImage& img, const EdgeParams& params) { return detect_edges_full(img, params).edges; }

namespace {

// Squared-distance transform of a sampled function along one line
// (lower envelope of parabolas).
void edt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v, std::vector<double>& z) {
    const int n = static_cast<int>(f.size());
    const double inf = std::numeric_limits<double>::infinity();
    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (f[q] == inf) continue;
        while (true) {
            if (k < 0) {
                k = 0;
                v[0] = q;
                z[0] = -inf;
                z[1] = inf;
                break;
            }
            const double s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
            if (s <= z[k]) {
                --k;
                continue;
            }
            ++k;
            v[k] = q;
            z[k] = s;
            z[k + 1] = inf;
            break;
        }
    }
    if (k < 0) {
        std::fill(d.begin(), d.end(), inf);
        return;
    }
    int j = 0;
    for (int q = 0; q < n; ++q) {
        while (z[j + 1] < q) ++j;
        const double diff = q - v[j];
        d[q] = diff * diff + f[v[j]];
    }
}

}  // namespace

std::vector<double> distance_transform(const EdgeMap& map) {
    const int w = map.width;
    const int h = map.height;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> grid(static_cast<std::size_t>(w) * h);
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = map.bits[i] ? 0.0 : inf;

    const int n = std::max(w, h);
    std::vector<double> f(n), d(n), z(n + 1);
    std::vector<int> v(n);
    for (int x = 0; x < w; ++x) {
        f.resize(h);
        d.resize(h);
        for (int y = 0; y < h; ++y) f[y] = grid[static_cast<std::size_t>(y) * w + x];
        edt_1d(f, d, v, z);
        for (int y = 0; y < h; ++y) grid[static_cast<std::size_t>(y) * w + x] = d[y];
    }
    for (int y = 0; y < h; ++y) {
        f.resize(w);
        d.resize(w);
        for (int x = 0; x < w; ++x) f[x] = grid[static_cast<std::size_t>(y) * w + x];
        edt_1d(f, d, v, z);
        for (int x = 0; x < w; ++x) grid[static_cast<std::size_t>(y) * w + x] = std::sqrt(d[x]);
    }
    return grid;
}

double baddeley_metric(const EdgeMap& test, const EdgeMap& ref, double p, double c) {
    if (test.width != ref.width || test.height != ref.height)
        throw InvalidArgument("baddeley_metric: dimension mismatch");
    if (!(p >= 1.0)) throw InvalidArgument("baddeley_metric: p must be >= 1");
    if (c <= 0.0) c = std::hypot(static_cast<double>(test.width), static_cast<double>(test.height));
    const auto da = distance_transform(test);
    const auto db = distance_transform(ref);
    if (da.empty()) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < da.size(); ++i) {
        const double diff = std::abs(std::min(da[i], c) - std::min(db[i], c));
        acc += std::pow(diff, p);
    }
    return std::pow(acc / static_cast<double>(da.size()), 1.0 / p) / c;
}

double esi_from_entropy(double entropy, double mu) {
    const double spread = std::exp(2.0 * entropy - 1.0) / (2.0 * std::numbers::pi);
    const double m2 = mu * mu;
    if (m2 == 0.0 && spread == 0.0) return 1.0;
    return m2 / (m2 + spread);
}

EdgeMap boundary_ground_truth(const GrayImage& img) {
    EdgeMap map(img.width(), img.height());
    static constexpr int kN[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            for (const auto& n : kN) {
                const int xx = x + n[0];
                const int yy = y + n[1];
                if (xx < 0 || yy < 0 || xx >= img.width() || yy >= img.height()) continue;
                if (img(xx, yy) < img(x, y)) {
                    map.set(x, y);
                    break;
                }
            }
        }
    }
    return map;
}

GrayImage edge_map_to_image(const EdgeMap& map) {
    GrayImage img(map.width, map.height, 255.0);
    for (std::size_t i = 0; i < map.bits.size(); ++i)
        if (map.bits[i]) img.pixels()[i] = 0.0;
    return img;
}

EdgeMap edge_map_from_image(const GrayImage& img) {
    EdgeMap map(img.width(), img.height());
    for (std::size_t i = 0; i < img.size(); ++i) map.bits[i] = img.pixels()[i] < 128.0 ? 1 : 0;
    return map;
}

}  // namespace ocular
