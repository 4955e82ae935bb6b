#pragma once

#include <vector>

#include "wirssi/spectrum.hpp"
#include "wirssi/types.hpp"

namespace wirssi {

/// One CPI's AoA-compressed Doppler energy profile.
struct DopplerProfileRow {
    std::vector<double> values;
    std::vector<double> doppler_axis_hz;
    double timestamp_s = 0.0;
};

/// Nonnegative energy map S = |Y|², elementwise.
RealMatrix energy_map(const DopplerAoaSpectrum& spec);

/// AoA compression p(f) = Σ_θ S(f, θ).
std::vector<double> doppler_profile(const RealMatrix& energy);

/// Doppler-profile row of one spectrum (energy map + compression).
DopplerProfileRow profile_of(const DopplerAoaSpectrum& spec);

/// CPI-time × Doppler feature matrix.
struct TimeDopplerMap {
    RealMatrix values;  ///< [cpi][doppler bin], nonnegative
    std::vector<double> doppler_axis_hz;
    std::vector<double> cpi_timestamps_s;
};

/// Stacks per-CPI profiles into a map; all rows must share the Doppler axis
/// (AxisMismatch otherwise).
TimeDopplerMap stack_time_doppler(const std::vector<DopplerProfileRow>& profiles);

/// Log-scaled copy, 10·log10(1 + S).
RealMatrix log_scaled(const RealMatrix& map);

/// Energy-weighted Doppler centroid of one map row; zero for empty rows.
double doppler_centroid(const TimeDopplerMap& map, std::size_t row);

}  // namespace wirssi
