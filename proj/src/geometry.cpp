#include "wirssi/geometry.hpp"

#include <cmath>
#include <numbers>

#include "wirssi/errors.hpp"

namespace wirssi {

BistaticGeometry::BistaticGeometry(Point2 tx_position, Point2 rx_origin, Point2 array_axis,
                                   int num_antennas, std::optional<double> antenna_spacing_m,
                                   double carrier_hz)
    : tx_world_(tx_position), rx_world_(rx_origin), num_antennas_(num_antennas), carrier_hz_(carrier_hz) {
    if (num_antennas_ < 2) throw ConfigError("geometry: num_antennas must be >= 2");
    if (!(carrier_hz_ > 0.0)) throw ConfigError("geometry: carrier frequency must be positive");
    const double axis_len = norm(array_axis);
    if (!(axis_len > 0.0)) throw ConfigError("geometry: array_axis must be a nonzero vector");
    axis_unit_ = {array_axis.x / axis_len, array_axis.y / axis_len};

    wavelength_m_ = kSpeedOfLight / carrier_hz_;
    spacing_m_ = antenna_spacing_m.value_or(wavelength_m_ / 2.0);
    if (!(spacing_m_ > 0.0)) throw ConfigError("geometry: antenna spacing must be positive");

    d_s_ = distance(tx_world_, rx_world_);
    if (!(d_s_ > 0.0)) throw ConfigError("geometry: Tx and Rx must not coincide");

    tx_local_ = to_local(tx_world_);
    if (tx_local_.y < 0.0) throw ConfigError("geometry: transmitter must lie in the sensing half-plane (local y >= 0)");
    theta_s_ = std::atan2(tx_local_.x, tx_local_.y);
    sin_theta_s_ = std::sin(theta_s_);
}

bool BistaticGeometry::blind_configuration() const {
    return std::abs(sin_theta_s_) < kBlindSinThreshold;
}

Point2 BistaticGeometry::to_local(const Point2& world) const {
    const Point2 d = world - rx_world_;
    // local x along the array axis, local y along its +90° normal
    return {d.x * axis_unit_.x + d.y * axis_unit_.y, -d.x * axis_unit_.y + d.y * axis_unit_.x};
}

Point2 BistaticGeometry::to_world(const Point2& local) const {
    return {rx_world_.x + local.x * axis_unit_.x - local.y * axis_unit_.y,
            rx_world_.y + local.x * axis_unit_.y + local.y * axis_unit_.x};
}

double solve_target_range(const PolarDetection& det, const BistaticGeometry& geo) {
    const double dx = det.bistatic_range_m;
    const double ds = geo.baseline_m();
    if (dx <= ds) throw InvalidRange("solve_target_range: bistatic range must exceed the baseline");
    const double denom = dx - ds * std::cos(det.aoa_rad - geo.theta_s_rad());
    if (denom <= kRangeDenomEpsilonM)
        throw DegenerateGeometry("solve_target_range: target on the ellipse degeneracy");
    return (dx * dx - ds * ds) / (2.0 * denom);
}

Point2 polar_to_cartesian(const PolarDetection& det, const BistaticGeometry& geo) {
    const double d = solve_target_range(det, geo);
    return {d * std::sin(det.aoa_rad), d * std::cos(det.aoa_rad)};
}

PolarDetection cartesian_to_polar(const Point2& local_point, const BistaticGeometry& geo) {
    const double d_rx = norm(local_point);
    const double d_tx = distance(local_point, geo.tx_local());
    if (d_rx <= 0.0 || d_tx <= 0.0)
        throw CoincidentPoint("cartesian_to_polar: target coincides with a terminal");
    PolarDetection det;
    det.bistatic_range_m = d_tx + d_rx;
    det.bistatic_delay_s = det.bistatic_range_m / kSpeedOfLight;
    det.aoa_rad = std::atan2(local_point.x, local_point.y);
    return det;
}

}  // namespace wirssi
