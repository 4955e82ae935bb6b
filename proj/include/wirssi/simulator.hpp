#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "wirssi/geometry.hpp"
#include "wirssi/trajectory.hpp"
#include "wirssi/types.hpp"

namespace wirssi {

/// Complex CSI tensor, [antenna][subcarrier][time].
struct CsiTensor {
    std::size_t n_antennas = 0;
    std::size_t n_subcarriers = 0;
    std::size_t n_samples = 0;
    std::vector<std::complex<double>> data;

    CsiTensor() = default;
    CsiTensor(std::size_t n, std::size_t l, std::size_t m)
        : n_antennas(n), n_subcarriers(l), n_samples(m), data(n * l * m) {}

    std::complex<double>& at(std::size_t i, std::size_t j, std::size_t k) {
        return data[(i * n_subcarriers + j) * n_samples + k];
    }
    const std::complex<double>& at(std::size_t i, std::size_t j, std::size_t k) const {
        return data[(i * n_subcarriers + j) * n_samples + k];
    }
};

struct AgcProfile {
    double initial_gain = 1.0;
    double walk_sigma_db = 0.0;  ///< per-block random-walk step; 0 disables
    int block_samples = 128;     ///< gain held constant over each block
};

struct ChannelConfig {
    std::vector<double> subcarrier_hz;          ///< f_j, absolute
    double sample_interval_s = 1e-3;            ///< Δt
    double power_scale = 1.0;                   ///< η
    AgcProfile agc;
    double noise_floor_db = -300.0;             ///< per-subcarrier complex noise power; <= -250 disables
    double rssi_quantization_step_db = 1.0;
    double rssi_clamp_min_db = -300.0;
    double rssi_clamp_max_db = 300.0;

    /// Intel-5300-like default: `count` tones uniform over ±half_span around the carrier.
    static std::vector<double> uniform_subcarriers(double carrier_hz, int count = 30,
                                                   double half_span_hz = 10e6);
    void validate() const;
};

enum class StochasticMode { off, iid, random_walk };

struct StochasticSpec {
    StochasticMode mode = StochasticMode::off;
    double sigma = 0.0;  ///< per-sample draw (iid) or per-sample step (random_walk)
};

struct ImpairmentConfig {
    StochasticSpec timing_offset;               ///< τ^TO, seconds
    StochasticSpec cfo_phase;                    ///< φ^CFO, radians
    std::vector<double> per_antenna_phase_rad;   ///< φ^PO; empty = zeros
    bool random_pi_jumps = false;                ///< add 0/π per antenna, drawn once
    std::uint64_t seed = 0;
};

struct PathSpec {
    enum class Kind { static_path, dynamic_path };
    Kind kind = Kind::static_path;
    /// Γ^S (seconds) for static paths, Γ^X (seconds²) for the dynamic path.
    double amplitude_coefficient = 1e-7;
    /// Static only; unset means the Tx–Rx LOS delay.
    std::optional<double> fixed_delay_s;
    /// Static only; arrival angle, unset means θ^S.
    std::optional<double> aoa_rad;
    /// Dynamic only.
    std::optional<PathCurve> curve;
    double speed_mps = 1.0;

    static PathSpec los(double gamma_s = 1e-7);
    static PathSpec mover(PathCurve curve, double gamma_x, double speed_mps = 1.0);
};

struct SimulatedCapture {
    CsiTensor csi;
    std::vector<double> timestamps;
    RealMatrix rssi_db;          ///< quantized, [antenna][time]
    Trajectory ground_truth;     ///< sampled at CSI times (empty when no mover)
    double true_gamma = 0.0;     ///< mean_k ζ_k · Γ^X / Γ^S of the emitted run
};

/// Per-sample ground-truth series of the dynamic path, for oracles and checks.
struct DynamicPathTruth {
    std::vector<double> tau_tx_s;        ///< τ^{T→X}
    std::vector<double> tau_rx_s;        ///< τ^{X→R}
    std::vector<double> bistatic_m;      ///< c·(τ1+τ2)
    std::vector<double> sin_aoa;
    std::vector<double> zeta;            ///< 1/τ1 + 1/τ2
};

/// Minimum target–terminal clearance enforced on dynamic paths (τ_min support).
inline constexpr double kDefaultMinClearanceM = 1.0;

/// Bistatic channel synthesis. One LOS-bearing static path is required and at
/// most one dynamic path is supported. The dynamic path's phase advances with
/// the instantaneous bistatic delay, so Doppler is emergent; its amplitude is
/// Γ^X/(τ^{T→X}·τ^{X→R}) at every sample and the static amplitude is Γ^S/τ.
CsiTensor synthesize_csi(const BistaticGeometry& geo, const std::vector<PathSpec>& paths,
                         const ChannelConfig& cfg, const ImpairmentConfig& imp, double duration_s,
                         double min_clearance_m = kDefaultMinClearanceM);

/// Bandwidth-aggregated power per antenna/time, in quantized dB:
/// R = (1/L)·Σ_j η|CSI|², dB = 10·log10 R, rounded half-up to the step and
/// clamped. Zero power maps to the clamp floor.
RealMatrix derive_rssi(const CsiTensor& csi, const ChannelConfig& cfg);

/// Full capture: CSI, RSSI, ground truth and the planted reflection ratio.
SimulatedCapture simulate(const BistaticGeometry& geo, const std::vector<PathSpec>& paths,
                          const ChannelConfig& cfg, const ImpairmentConfig& imp, double duration_s,
                          double min_clearance_m = kDefaultMinClearanceM);

/// Ground-truth dynamic-path series for a sampled trajectory.
DynamicPathTruth dynamic_path_truth(const Trajectory& traj, const BistaticGeometry& geo);

struct ZetaBoundReport {
    double max_step = 0.0;       ///< max |ζ_{k+1} − ζ_k| observed
    double bound = 0.0;          ///< max over steps of (|Δτ1|+|Δτ2|)/τ_min²
    double tau_min_s = 0.0;
    bool holds = false;
};

/// Verifies the slow-variation bound on ζ for a trajectory that keeps at
/// least d_min from both terminals. Throws BoundViolation if the empirical
/// step change exceeds the analytic bound by more than 1e-12 relative.
ZetaBoundReport zeta_bound_check(const Trajectory& traj, const BistaticGeometry& geo, double d_min_m);

}  // namespace wirssi
