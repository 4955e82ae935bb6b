#pragma once

#include <span>
#include <vector>

#include "wirssi/geometry.hpp"
#include "wirssi/smoothing.hpp"
#include "wirssi/spectrum.hpp"
#include "wirssi/trajectory.hpp"

namespace wirssi {

/// Implied bistatic ranges beyond this are treated as non-physical and
/// dropped (the delay inversion diverges as peak magnitudes approach the
/// floor; indoor deployments bound the search the same way).
inline constexpr double kDefaultMaxBistaticRangeM = 32.0;

struct LocalizeResult {
    Trajectory trajectory;       ///< kind = raw
    std::size_t dropped = 0;     ///< detections rejected by geometry/range checks
};

/// Converts per-CPI detections and bistatic delays to Cartesian points.
/// Lists are aligned by index (same CPI order); entries whose delay is not
/// bistatic (d^X <= d^S), exceeds max_range_m, or hits the ellipse
/// degeneracy are dropped and counted.
LocalizeResult localize(std::span<const Detection> detections, std::span<const double> delays_s,
                        const BistaticGeometry& geo, double max_range_m = kDefaultMaxBistaticRangeM);

/// Hampel then Savitzky-Golay on x and y independently; timestamps unchanged.
Trajectory smooth_trajectory(const Trajectory& raw, const SmootherConfig& cfg);

struct ErrorReport {
    std::vector<double> err_x_m;
    std::vector<double> err_y_m;
    std::vector<double> err_xy_m;
    double median_x = 0.0, median_y = 0.0, median_xy = 0.0;
    double p90_x = 0.0, p90_y = 0.0, p90_xy = 0.0;
    std::vector<double> cdf;  ///< sorted joint errors
};

/// Positional error of an estimated trajectory against ground truth. Truth is
/// linearly interpolated to the estimate timestamps; estimate points outside
/// the truth span are ignored. Throws NoTemporalOverlap when nothing overlaps.
ErrorReport score(const Trajectory& estimate, const Trajectory& truth);

}  // namespace wirssi
