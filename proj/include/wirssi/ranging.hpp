#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wirssi/geometry.hpp"
#include "wirssi/spectrum.hpp"

namespace wirssi {

/// Calibrated reflection-coefficient ratio linking peak magnitude to delay.
/// This is the pipeline-level constant: it absorbs the spectrum
/// normalization, so it is only meaningful for magnitudes produced by the
/// same processing chain that calibrated it.
struct ReflectionRatio {
    double gamma = 0.0;
    std::size_t sample_count = 0;
    double dispersion = 0.0;  ///< standard deviation of per-location estimates
};

struct CalibrationSample {
    double peak_magnitude = 0.0;
    Point2 true_position;  ///< receiver-local frame
    double cpi_timestamp_s = 0.0;
};

inline constexpr double kMagnitudeFloor = 1e-6;

/// Bistatic delay from the spectral peak: τ^X = γ·τ^{T→R}/|Y|.
/// Throws BelowMagnitudeFloor at or below the magnitude floor and
/// RangeNotBistatic when the implied range does not exceed the baseline.
double delay_from_amplitude(const Detection& det, const ReflectionRatio& gamma,
                            const BistaticGeometry& geo);

/// One-shot calibration: per sample γ_s = |Y|·τ^X_true/τ^{T→R} with the true
/// delay from the forward geometry model; returns mean and dispersion.
ReflectionRatio calibrate_gamma(std::span<const CalibrationSample> samples, const BistaticGeometry& geo);

/// Median of the per-sample γ estimates (robustness diagnostic).
double calibration_median(std::span<const CalibrationSample> samples, const BistaticGeometry& geo);

struct ScaledRangePoint {
    double t_s = 0.0;
    double scaled_delay = 0.0;  ///< τ^{T→R}/|Y|, proportional to τ^X
    bool valid = false;
};

/// γ-free relative range series: τ^{T→R}/|Y| per detection. Entries whose
/// magnitude sits at or below the floor are flagged invalid and skipped.
std::vector<ScaledRangePoint> relative_range_track(std::span<const Detection> detections,
                                                   const BistaticGeometry& geo);

}  // namespace wirssi
