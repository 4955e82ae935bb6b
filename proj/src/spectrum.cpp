#include "wirssi/spectrum.hpp"

#include <cmath>
#include <numbers>

#include "wirssi/dsp.hpp"
#include "wirssi/errors.hpp"

namespace wirssi {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void SpectrumConfig::validate(int num_antennas) const {
    if (doppler_bins < 2 || doppler_bins % 2 != 0) throw ConfigError("spectrum: doppler_bins must be even and >= 2");
    if (!(doppler_max_hz > 0.0)) throw ConfigError("spectrum: doppler_max must be positive");
    if (aoa_bins < num_antennas) throw ConfigError("spectrum: aoa_bins must be >= the antenna count");
    if (zero_doppler_guard_bins < 0) throw ConfigError("spectrum: guard must be >= 0");
    if (!(detection_threshold_ratio >= 0.0)) throw ConfigError("spectrum: detection threshold must be >= 0");
}

std::vector<double> SpectrumConfig::doppler_axis() const {
    std::vector<double> f(doppler_bins);
    const double df = doppler_bin_hz();
    for (int d = 0; d < doppler_bins; ++d) f[d] = -doppler_max_hz + (d + 0.5) * df;
    return f;
}

std::vector<double> SpectrumConfig::aoa_axis() const {
    std::vector<double> a(aoa_bins);
    if (aoa_grid == AoaGrid::uniform_sine) {
        const double ds = 2.0 / aoa_bins;
        for (int i = 0; i < aoa_bins; ++i) a[i] = std::asin(-1.0 + (i + 0.5) * ds);
    } else {
        const double dth = std::numbers::pi / aoa_bins;
        for (int i = 0; i < aoa_bins; ++i) a[i] = -std::numbers::pi / 2.0 + (i + 0.5) * dth;
    }
    return a;
}

DopplerProfiles doppler_fft(const CpiWindow& cpi, const SpectrumConfig& cfg) {
    if (cpi.cpi_length < 2) throw ConfigError("doppler_fft: CPI must hold at least two samples");
    const std::size_t n = cpi.normalized_dynamic.rows;
    const std::size_t m = cpi.cpi_length;
    const double dt = cpi.sample_interval_s;

    DopplerProfiles out;
    out.doppler_axis_hz = cfg.doppler_axis();
    out.cpi_length = m;
    out.sample_interval_s = dt;
    out.timestamp_s = cpi.timestamp_s;
    const std::size_t nf = out.doppler_axis_hz.size();
    out.values = ComplexMatrix(n, nf);

    std::vector<double> taper(m, 1.0);
    if (cfg.window == WindowFunction::hann) {
        for (std::size_t k = 0; k < m; ++k)
            taper[k] = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(k) / (m - 1));
    }
    out.window_gain = 0.0;
    for (double w : taper) out.window_gain += w;

    // direct evaluation on the exact grid (a pow2 FFT cannot land on the
    // pinned 2·f_max/L spacing); cost is one small complex matmul per CPI
    std::vector<std::complex<double>> basis(nf * m);
    for (std::size_t f = 0; f < nf; ++f) {
        const double w = -kTwoPi * out.doppler_axis_hz[f] * dt;
        for (std::size_t k = 0; k < m; ++k) {
            const double ph = w * static_cast<double>(k);
            basis[f * m + k] = {std::cos(ph), std::sin(ph)};
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t f = 0; f < nf; ++f) {
            std::complex<double> acc{0.0, 0.0};
            const std::complex<double>* b = &basis[f * m];
            for (std::size_t k = 0; k < m; ++k) acc += taper[k] * cpi.normalized_dynamic.at(i, k) * b[k];
            out.values.at(i, f) = acc;
        }
    }
    return out;
}

DopplerAoaSpectrum aoa_fft(const DopplerProfiles& profiles, const BistaticGeometry& geo,
                           const SpectrumConfig& cfg) {
    const std::size_t n = profiles.values.rows;
    if (n < 1) throw ConfigError("aoa_fft: no antenna profiles");
    const std::size_t nf = profiles.doppler_axis_hz.size();

    DopplerAoaSpectrum spec;
    spec.doppler_axis_hz = profiles.doppler_axis_hz;
    spec.aoa_axis_rad = cfg.aoa_axis();
    spec.timestamp_s = profiles.timestamp_s;
    spec.sin_theta_s = geo.sin_theta_s();
    spec.blind_warning = geo.blind_configuration();
    const std::size_t na = spec.aoa_axis_rad.size();
    spec.values = ComplexMatrix(nf, na);

    // steering per antenna/bin, with transmitter compensation folded in
    std::vector<std::complex<double>> steer(n * na);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < na; ++a) {
            const double ph = std::numbers::pi * static_cast<double>(i) *
                              (spec.sin_theta_s - std::sin(spec.aoa_axis_rad[a]));
            steer[i * na + a] = {std::cos(ph), std::sin(ph)};
        }
    }

    const double scale = 1.0 / (profiles.window_gain * static_cast<double>(n));
    // row flip: bin d of the motion axis reads analysis bin nf-1-d, so that
    // positive Doppler means a shortening bistatic path
    for (std::size_t d = 0; d < nf; ++d) {
        const std::size_t src = nf - 1 - d;
        for (std::size_t a = 0; a < na; ++a) {
            std::complex<double> acc{0.0, 0.0};
            for (std::size_t i = 0; i < n; ++i) acc += profiles.values.at(i, src) * steer[i * na + a];
            spec.values.at(d, a) = acc * scale;
        }
    }
    return spec;
}

DopplerAoaSpectrum reject_mirror(DopplerAoaSpectrum spec, const BistaticGeometry& geo) {
    const double sin_s = geo.sin_theta_s();
    for (std::size_t a = 0; a < spec.aoa_axis_rad.size(); ++a) {
        if (std::sin(spec.aoa_axis_rad[a]) - sin_s < 0.0)
            for (std::size_t d = 0; d < spec.values.rows; ++d) spec.values.at(d, a) = {0.0, 0.0};
    }
    spec.mirror_rejected = true;
    return spec;
}

std::optional<Detection> find_peak(const DopplerAoaSpectrum& spec, const SpectrumConfig& cfg) {
    if (!spec.mirror_rejected) throw ConfigError("find_peak: mirror rejection must be applied first");
    const double guard_hz = cfg.zero_doppler_guard_bins * cfg.doppler_bin_hz();

    double best = 0.0;
    int best_d = -1, best_a = -1;
    std::vector<double> kept;
    kept.reserve(spec.values.data.size());
    for (std::size_t d = 0; d < spec.values.rows; ++d) {
        if (std::abs(spec.doppler_axis_hz[d]) < guard_hz) continue;
        for (std::size_t a = 0; a < spec.values.cols; ++a) {
            if (std::sin(spec.aoa_axis_rad[a]) - spec.sin_theta_s < 0.0) continue;
            const double mag = std::abs(spec.values.at(d, a));
            kept.push_back(mag);
            if (mag > best) {
                best = mag;
                best_d = static_cast<int>(d);
                best_a = static_cast<int>(a);
            }
        }
    }
    if (best_d < 0 || best <= cfg.magnitude_floor) return std::nullopt;
    const double med = dsp::median(kept);
    if (best < cfg.detection_threshold_ratio * med) return std::nullopt;

    Detection det;
    det.doppler_hz = spec.doppler_axis_hz[best_d];
    det.aoa_rad = spec.aoa_axis_rad[best_a];
    det.peak_magnitude = best;
    det.cpi_timestamp_s = spec.timestamp_s;
    det.doppler_bin = best_d;
    det.aoa_bin = best_a;
    return det;
}

}  // namespace wirssi
