#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wirssi/features.hpp"
#include "wirssi/geometry.hpp"
#include "wirssi/preprocess.hpp"
#include "wirssi/ranging.hpp"
#include "wirssi/simulator.hpp"
#include "wirssi/smoothing.hpp"
#include "wirssi/spectrum.hpp"
#include "wirssi/tracking.hpp"

namespace wirssi {

/// Per-stage processing-time statistics over the CPIs of one run,
/// I/O excluded (monotonic clock around each stage).
struct StageTimings {
    struct Stat {
        double mean_ms = 0.0;
        double p99_ms = 0.0;
    };
    Stat preprocess;
    Stat spectrum;
    Stat ranging;
    Stat total;
    std::size_t cpis = 0;
};

struct TrackingParams {
    PreprocessParams preprocess;
    SpectrumConfig spectrum;
    SmootherConfig smoother;
    double max_bistatic_range_m = kDefaultMaxBistaticRangeM;
};

struct TrackResult {
    Trajectory raw;
    Trajectory smoothed;
    std::vector<Detection> detections;   ///< one per detected CPI
    std::size_t cpis_total = 0;
    std::size_t cpis_no_target = 0;
    std::size_t drops_range = 0;         ///< delay/geometry validity drops
    GapFillStats gaps;
    StageTimings timings;
};

/// Full tracking pipeline on a trace: gap regularization, clutter removal,
/// Doppler-AoA spectra, peak detection, amplitude ranging, localization and
/// smoothing.
TrackResult run_tracking(const RssiTrace& trace, const BistaticGeometry& geo,
                         const ReflectionRatio& gamma, const TrackingParams& params);

struct CalibrationRunResult {
    ReflectionRatio ratio;
    double median_gamma = 0.0;
    std::size_t cpis_used = 0;
};

/// Calibration driver: detections are paired with truth positions
/// interpolated to CPI timestamps. Throws InsufficientDetections when fewer
/// than 5 usable CPIs pair up, NoTemporalOverlap when none do by time.
CalibrationRunResult run_calibration(const RssiTrace& trace, const Trajectory& truth,
                                     const BistaticGeometry& geo, const TrackingParams& params);

struct FeatureParams {
    PreprocessParams preprocess;
    SpectrumConfig spectrum;
    bool reject_mirror = true;  ///< pre-rejection maps available for ablation
};

/// Time-Doppler feature map of a trace.
TimeDopplerMap run_features(const RssiTrace& trace, const BistaticGeometry& geo,
                            const FeatureParams& params);

// ---- simulation presets -------------------------------------------------

/// Default bistatic deployment: Rx array at the origin along +x, Tx 2.3 m
/// away at sin θ^S = 0.3, carrier 5.32 GHz, three antennas at λ/2.
BistaticGeometry default_geometry();

struct ScenarioPreset {
    std::string name;
    PathCurve curve;  // no default: presets are built via make_preset
    double speed_mps = 1.0;
    double planted_gamma = 0.3;   ///< target Γ̃^X/Γ^S (mean over one lap)
    double gamma_s = 1e-7;        ///< LOS coefficient Γ^S
    ChannelConfig channel;        ///< quantized 1 dB, 30 tones ±10 MHz, mild noise dither
};

/// Named trajectory presets: "ellipse", "line", "rectangle", "pushpull".
ScenarioPreset make_preset(const std::string& name, const BistaticGeometry& geo);

/// Γ^X that plants a given mean reflection ratio for a curve (mean ζ over one lap).
double gamma_x_for_planted_ratio(const PathCurve& curve, double speed_mps, double planted_gamma,
                                 double gamma_s, const BistaticGeometry& geo);

/// Capture for a preset: builds the path list (LOS + mover) and simulates.
SimulatedCapture simulate_preset(const ScenarioPreset& preset, const BistaticGeometry& geo,
                                 double duration_s, std::uint64_t seed);

/// RSSI trace view of a capture.
RssiTrace trace_of(const SimulatedCapture& capture, double sample_rate_hz);

}  // namespace wirssi
