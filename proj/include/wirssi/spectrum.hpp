#pragma once

#include <optional>
#include <vector>

#include "wirssi/geometry.hpp"
#include "wirssi/preprocess.hpp"
#include "wirssi/types.hpp"

namespace wirssi {

enum class WindowFunction { none, hann };
enum class AoaGrid { uniform_sine, uniform_angle };

struct SpectrumConfig {
    int doppler_bins = 128;          ///< L_Doppler, even
    double doppler_max_hz = 100.0;   ///< grid covers (−f_max, f_max)
    int aoa_bins = 64;               ///< over [−90°, 90°]
    int zero_doppler_guard_bins = 2; ///< peak search excludes |f| < guard·Δf
    WindowFunction window = WindowFunction::none;
    AoaGrid aoa_grid = AoaGrid::uniform_sine;
    double detection_threshold_ratio = 4.0;  ///< CFAR-like peak/median rule
    double magnitude_floor = 1e-6;           ///< peaks at or below are NoTarget

    void validate(int num_antennas) const;

    /// Half-bin-offset Doppler grid, negation-closed, spacing 2·f_max/L.
    std::vector<double> doppler_axis() const;
    /// AoA grid in radians, half-bin-offset in sinθ (or θ), negation-closed.
    std::vector<double> aoa_axis() const;
    double doppler_bin_hz() const { return 2.0 * doppler_max_hz / doppler_bins; }
};

/// Per-antenna complex Doppler profiles X_i(f) on the analysis grid
/// (kernel e^{−j2πf·kΔt}; real inputs give X(−f) = conj(X(f))).
struct DopplerProfiles {
    ComplexMatrix values;               ///< [antenna][doppler bin]
    std::vector<double> doppler_axis_hz;
    std::size_t cpi_length = 0;
    double window_gain = 1.0;           ///< Σ_k w_k of the taper (M for none)
    double sample_interval_s = 1e-3;
    double timestamp_s = 0.0;
};

/// Joint Doppler–AoA response of one CPI.
///
/// Rows are stored on the *motion* Doppler axis: positive Doppler means the
/// bistatic path is shortening (f = −(1/λ)·d(path length)/dt), i.e. the
/// analysis-frequency rows of the transform are reversed. Magnitudes are
/// normalized by (window gain · N) so a unit cross-term cosine of amplitude A
/// produces a peak of A/2.
struct DopplerAoaSpectrum {
    ComplexMatrix values;               ///< [doppler bin][aoa bin]
    std::vector<double> doppler_axis_hz;
    std::vector<double> aoa_axis_rad;
    double timestamp_s = 0.0;
    double sin_theta_s = 0.0;           ///< steering reference used
    bool mirror_rejected = false;
    bool blind_warning = false;         ///< |sin θ^S| below the blind threshold
};

struct Detection {
    double doppler_hz = 0.0;   ///< motion convention (approaching positive)
    double aoa_rad = 0.0;
    double peak_magnitude = 0.0;
    double cpi_timestamp_s = 0.0;
    int doppler_bin = 0;
    int aoa_bin = 0;
};

/// Doppler transform of one CPI: X_i(f) = Σ_k Δ𝓡_{i,k}·e^{−j2πf·kΔt}
/// evaluated directly on the configured grid.
DopplerProfiles doppler_fft(const CpiWindow& cpi, const SpectrumConfig& cfg);

/// Steered sum over antennas with transmitter-direction compensation:
/// Y(f,θ) = Σ_i X_i(f)·e^{jπi·sinθ^S}·e^{−jπi·sinθ}, then magnitude
/// normalization and the motion-axis row flip (see DopplerAoaSpectrum).
DopplerAoaSpectrum aoa_fft(const DopplerProfiles& profiles, const BistaticGeometry& geo,
                           const SpectrumConfig& cfg);

/// Zeroes the mirrored sector sinθ − sinθ^S < 0; the kept sector is untouched.
DopplerAoaSpectrum reject_mirror(DopplerAoaSpectrum spec, const BistaticGeometry& geo);

/// Dominant peak outside the zero-Doppler guard, nullopt when the spectrum is
/// empty or the peak fails the threshold rule. Ties break toward the lowest
/// Doppler bin index, then the lowest AoA bin index.
std::optional<Detection> find_peak(const DopplerAoaSpectrum& spec, const SpectrumConfig& cfg);

}  // namespace wirssi
