#include "wirssi/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "wirssi/dsp.hpp"
#include "wirssi/errors.hpp"

namespace wirssi {

namespace {

constexpr double kMadScale = 1.4826;       // MAD → stddev for normal data
constexpr double kZeroMadTolerance = 1e-9;

// solve the small SPD system G·x = b by Gaussian elimination with pivoting
std::vector<double> solve_dense(std::vector<std::vector<double>> g, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(g[r][col]) > std::abs(g[piv][col])) piv = r;
        std::swap(g[col], g[piv]);
        std::swap(b[col], b[piv]);
        const double d = g[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = g[r][col] / d;
            for (std::size_t c = col; c < n; ++c) g[r][c] -= f * g[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t r = n; r-- > 0;) {
        double acc = b[r];
        for (std::size_t c = r + 1; c < n; ++c) acc -= g[r][c] * x[c];
        x[r] = acc / g[r][r];
    }
    return x;
}

std::vector<double> sg_center_weights(int width, int order) {
    const int h = (width - 1) / 2;
    const int p = std::min(order, width - 1);
    // G_{ab} = Σ_k k^{a+b} over the window offsets
    std::vector<std::vector<double>> g(p + 1, std::vector<double>(p + 1, 0.0));
    for (int a = 0; a <= p; ++a)
        for (int b = 0; b <= p; ++b)
            for (int k = -h; k <= h; ++k) g[a][b] += std::pow(static_cast<double>(k), a + b);
    std::vector<double> e0(p + 1, 0.0);
    e0[0] = 1.0;
    const std::vector<double> m = solve_dense(std::move(g), std::move(e0));
    std::vector<double> w(width, 0.0);
    for (int k = -h; k <= h; ++k) {
        double acc = 0.0, kp = 1.0;
        for (int j = 0; j <= p; ++j) {
            acc += m[j] * kp;
            kp *= static_cast<double>(k);
        }
        w[k + h] = acc;
    }
    return w;
}

}  // namespace

void SmootherConfig::validate() const {
    if (hampel_window < 3 || hampel_window % 2 == 0) throw ConfigError("smoother: hampel window must be odd and >= 3");
    if (!(hampel_threshold >= 0.0)) throw ConfigError("smoother: hampel threshold must be >= 0");
    if (sg_window % 2 == 0 || sg_window <= sg_order) throw ConfigError("smoother: SG window must be odd and > order");
    if (sg_order < 0) throw ConfigError("smoother: SG order must be >= 0");
}

HampelResult hampel_filter(std::span<const double> series, const SmootherConfig& cfg) {
    cfg.validate();
    const std::size_t n = series.size();
    HampelResult res;
    res.filtered.assign(series.begin(), series.end());
    res.outlier_mask.assign(n, false);
    if (n == 0) return res;

    const std::size_t half = static_cast<std::size_t>((cfg.hampel_window - 1) / 2);
    if (n < static_cast<std::size_t>(cfg.hampel_window)) return res;
    std::vector<double> win;
    // edge samples without a full centered window pass through unfiltered
    // (a truncated window's median is biased on trends and misflags them)
    for (std::size_t i = half; i + half < n; ++i) {
        const std::size_t lo = i - half;
        const std::size_t hi = i + half + 1;
        win.assign(series.begin() + lo, series.begin() + hi);
        const double med = dsp::median(win);
        const double m = dsp::mad(win, med);
        const double dev = std::abs(series[i] - med);
        const bool out = m == 0.0 ? dev > kZeroMadTolerance : dev > cfg.hampel_threshold * kMadScale * m;
        if (out) {
            res.filtered[i] = med;
            res.outlier_mask[i] = true;
        }
    }
    return res;
}

std::vector<double> savitzky_golay(std::span<const double> series, const SmootherConfig& cfg) {
    cfg.validate();
    const std::size_t n = series.size();
    if (n < static_cast<std::size_t>(cfg.sg_order + 2))
        throw SeriesTooShort("savitzky_golay: series shorter than order + 2");

    const int half_max = (cfg.sg_window - 1) / 2;
    std::vector<double> out(n, 0.0);
    std::map<int, std::vector<double>> kernel_cache;
    for (std::size_t i = 0; i < n; ++i) {
        const int h = std::min<int>({half_max, static_cast<int>(i), static_cast<int>(n - 1 - i)});
        const int width = 2 * h + 1;
        auto it = kernel_cache.find(width);
        if (it == kernel_cache.end()) it = kernel_cache.emplace(width, sg_center_weights(width, cfg.sg_order)).first;
        const auto& w = it->second;
        double acc = 0.0;
        for (int k = -h; k <= h; ++k) acc += w[k + h] * series[i + k];
        out[i] = acc;
    }
    return out;
}

std::vector<double> savitzky_golay_kernel(int window, int order) {
    if (window < 1 || window % 2 == 0) throw ConfigError("sg kernel: window must be odd and >= 1");
    if (order < 0) throw ConfigError("sg kernel: order must be >= 0");
    return sg_center_weights(window, order);
}

}  // namespace wirssi
