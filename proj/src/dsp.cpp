#include "wirssi/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wirssi/types.hpp"

namespace wirssi {

double norm(const Point2& p) { return std::hypot(p.x, p.y); }
double distance(const Point2& a, const Point2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace wirssi

namespace wirssi::dsp {

void fft_radix2(std::vector<std::complex<double>>& x) {
    const std::size_t n = x.size();
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft_radix2: size must be a power of two");

    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = x[i + k];
                const std::complex<double> v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

std::vector<std::complex<double>> zero_padded_fft(std::span<const double> x, std::size_t fft_size) {
    std::vector<std::complex<double>> buf(fft_size, {0.0, 0.0});
    const std::size_t m = std::min(x.size(), fft_size);
    for (std::size_t i = 0; i < m; ++i) buf[i] = {x[i], 0.0};
    fft_radix2(buf);
    return buf;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

double median(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("median: empty input");
    std::vector<double> tmp(v.begin(), v.end());
    const std::size_t mid = tmp.size() / 2;
    std::nth_element(tmp.begin(), tmp.begin() + mid, tmp.end());
    double hi = tmp[mid];
    if (tmp.size() % 2 == 1) return hi;
    const double lo = *std::max_element(tmp.begin(), tmp.begin() + mid);
    return 0.5 * (lo + hi);
}

double mad(std::span<const double> v, double center) {
    std::vector<double> dev(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) dev[i] = std::abs(v[i] - center);
    return median(dev);
}

double quantile(std::span<const double> v, double q) {
    if (v.empty()) throw std::invalid_argument("quantile: empty input");
    std::vector<double> tmp(v.begin(), v.end());
    std::sort(tmp.begin(), tmp.end());
    const double pos = q * static_cast<double>(tmp.size());
    std::size_t idx = static_cast<std::size_t>(std::ceil(pos));
    if (idx > 0) --idx;
    if (idx >= tmp.size()) idx = tmp.size() - 1;
    return tmp[idx];
}

double mean(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double stddev(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace wirssi::dsp
