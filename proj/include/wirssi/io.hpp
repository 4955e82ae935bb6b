#pragma once

#include <filesystem>
#include <string>

#include "wirssi/features.hpp"
#include "wirssi/geometry.hpp"
#include "wirssi/preprocess.hpp"
#include "wirssi/ranging.hpp"
#include "wirssi/simulator.hpp"
#include "wirssi/tracking.hpp"
#include "wirssi/trajectory.hpp"

namespace wirssi::io {

namespace fs = std::filesystem;

// geometry JSON:
// {"tx_m": [x,y], "rx_m": [x,y], "array_axis": [x,y], "num_antennas": 3,
//  "antenna_spacing_m": null|number, "carrier_hz": 5.32e9}
BistaticGeometry read_geometry(const fs::path& path);
void write_geometry(const fs::path& path, const BistaticGeometry& geo);
BistaticGeometry geometry_from_json_text(const std::string& text);

/// Stable fingerprint of the numeric geometry fields; calibration files carry
/// it so a calibration cannot silently be reused under a different deployment.
std::string geometry_hash(const BistaticGeometry& geo);

// RSSI trace CSV: header "t_s,rssi_db_a1,...,rssi_db_aN"; empty cells parse as NaN
void write_trace_csv(const fs::path& path, const RssiTrace& trace);
RssiTrace read_trace_csv(const fs::path& path);

// trajectory CSV: header "t_s,x_m,y_m"
void write_trajectory_csv(const fs::path& path, const Trajectory& traj);
Trajectory read_trajectory_csv(const fs::path& path, Trajectory::Kind kind);

// calibration JSON: {"gamma", "dispersion", "sample_count", "geometry_hash"}
void write_calibration(const fs::path& path, const ReflectionRatio& ratio, const std::string& geo_hash);
ReflectionRatio read_calibration(const fs::path& path, std::string* geo_hash_out = nullptr);

// error report JSON (median/p90 per axis + CDF array) and CDF CSV
void write_error_report(const fs::path& path, const ErrorReport& rep);
void write_cdf_csv(const fs::path& path, const ErrorReport& rep);
void write_per_point_errors_csv(const fs::path& path, const Trajectory& est, const ErrorReport& rep);

// raw CSI dump: ASCII header "WIRSSI-CSI v1 N L M\n" then little-endian
// float32 interleaved (re, im), antenna-major [i][j][k]
void write_csi_dump(const fs::path& path, const CsiTensor& csi);
CsiTensor read_csi_dump(const fs::path& path);

// time-Doppler map: binary "WIRSSI-TD v1 T F\n" + little-endian float32
// row-major, or CSV with doppler axis header and one row per CPI
void write_time_doppler_binary(const fs::path& path, const TimeDopplerMap& map, bool log_scale);
TimeDopplerMap read_time_doppler_binary(const fs::path& path);
void write_time_doppler_csv(const fs::path& path, const TimeDopplerMap& map, bool log_scale);
TimeDopplerMap read_time_doppler_csv(const fs::path& path);

/// Per-CPI spectrum magnitude dump (grid of |Y| with axis headers).
void write_spectrum_csv(const fs::path& path, const DopplerAoaSpectrum& spec);

}  // namespace wirssi::io
