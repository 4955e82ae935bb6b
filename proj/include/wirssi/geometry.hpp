#pragma once

#include <optional>

#include "wirssi/types.hpp"

namespace wirssi {

/// Bistatic delay/angle pair for one detection.
/// Angles follow the receiver-local convention: array along +x, sensing
/// half-plane y > 0, aoa measured from broadside so that x = d·sin(aoa).
struct PolarDetection {
    double bistatic_delay_s = 0.0;  ///< total Tx→target→Rx delay
    double bistatic_range_m = 0.0;  ///< c · bistatic_delay_s
    double aoa_rad = 0.0;           ///< target angle at the array, in [-π/2, π/2]
};

/// Tx/Rx placement and array parameters of one bistatic deployment.
///
/// Positions may be given in any world frame; the receiver-local frame
/// (array phase center at the origin, array axis = +x) is derived once and
/// used for all downstream processing. The transmitter must lie in the
/// sensing half-plane (local y >= 0) so that theta_s stays in [-π/2, π/2].
class BistaticGeometry {
public:
    BistaticGeometry(Point2 tx_position, Point2 rx_origin, Point2 array_axis, int num_antennas,
                     std::optional<double> antenna_spacing_m, double carrier_hz);

    const Point2& tx_position() const { return tx_world_; }
    const Point2& rx_origin() const { return rx_world_; }
    const Point2& array_axis() const { return axis_unit_; }
    int num_antennas() const { return num_antennas_; }
    double antenna_spacing_m() const { return spacing_m_; }
    double carrier_hz() const { return carrier_hz_; }
    double wavelength_m() const { return wavelength_m_; }

    /// Tx–Rx baseline length d^S.
    double baseline_m() const { return d_s_; }
    /// Baseline propagation delay d^S / c.
    double baseline_delay_s() const { return d_s_ / kSpeedOfLight; }
    /// AoA of the transmitter at the array (theta^S).
    double theta_s_rad() const { return theta_s_; }
    double sin_theta_s() const { return sin_theta_s_; }

    /// True when |sin theta^S| < 0.05 and the transmitter provides no usable
    /// spatial phase reference (mirror pairs become indistinguishable).
    bool blind_configuration() const;

    /// Transmitter position expressed in the receiver-local frame.
    const Point2& tx_local() const { return tx_local_; }

    Point2 to_local(const Point2& world) const;
    Point2 to_world(const Point2& local) const;

private:
    Point2 tx_world_, rx_world_, axis_unit_;
    Point2 tx_local_;
    int num_antennas_;
    double spacing_m_;
    double carrier_hz_;
    double wavelength_m_;
    double d_s_;
    double theta_s_;
    double sin_theta_s_;
};

inline constexpr double kBlindSinThreshold = 0.05;
inline constexpr double kRangeDenomEpsilonM = 1e-6;

/// Target→receiver distance from a bistatic detection (law-of-cosines
/// inversion of the delay ellipse).
/// Throws InvalidRange when d^X <= d^S and DegenerateGeometry when the
/// denominator d^X - d^S·cos(θ^X - θ^S) falls below kRangeDenomEpsilonM.
double solve_target_range(const PolarDetection& det, const BistaticGeometry& geo);

/// Receiver-local Cartesian position (x = d·sinθ, y = d·cosθ) of a detection.
Point2 polar_to_cartesian(const PolarDetection& det, const BistaticGeometry& geo);

/// Forward model: bistatic range/delay and AoA of a receiver-local point.
/// Throws CoincidentPoint when the point sits on a terminal.
PolarDetection cartesian_to_polar(const Point2& local_point, const BistaticGeometry& geo);

}  // namespace wirssi
