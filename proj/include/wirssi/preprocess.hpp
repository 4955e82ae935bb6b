#pragma once

#include <cstddef>
#include <vector>

#include "wirssi/types.hpp"

namespace wirssi {

/// Timestamped per-antenna RSSI samples in dB — the pipeline's sensing input.
struct RssiTrace {
    std::vector<double> timestamps;  ///< strictly increasing, seconds
    RealMatrix samples_db;           ///< [antenna][time]
    double sample_rate_hz = 1000.0;

    void validate() const;
};

/// One coherent processing interval after clutter removal.
struct CpiWindow {
    RealMatrix normalized_dynamic;       ///< Δ𝓡, [antenna][sample], dimensionless
    std::vector<double> static_estimate;  ///< per-antenna linear static power
    std::size_t start_index = 0;
    std::size_t cpi_length = 0;
    double timestamp_s = 0.0;            ///< window-center time
    double sample_interval_s = 1e-3;
};

enum class ClutterMode {
    auto_select,  ///< CPI mean at >= 200 Hz sample rate, EMA below
    cpi_mean,
    ema,
};

struct PreprocessParams {
    ClutterMode mode = ClutterMode::auto_select;
    std::size_t cpi_length = 128;
    std::size_t cpi_step = 32;
    double ema_weight = 0.3;          ///< weight of the newest sample
    double ema_rate_threshold_hz = 200.0;
    std::size_t max_hold_gap = 5;     ///< gaps shorter than this many intervals are hold-filled

    void validate() const;
};

/// dB → linear power, 10^(db/10).
double db_to_linear(double db);

/// Single CPI with per-window mean clutter removal (static estimate = window
/// mean, residue normalized by it). Throws ZeroStaticPower on nonpositive means.
CpiWindow extract_cpi(const RssiTrace& trace, std::size_t start, std::size_t cpi_length);

/// All CPI windows of a trace at the configured length/step, CPI-mean mode.
std::vector<CpiWindow> make_cpi_windows(const RssiTrace& trace, const PreprocessParams& params);

/// Streamed variant: the static estimate is an exponential moving average
/// S_k = w·R_k + (1−w)·S_{k−1} updated per sample (seeded with the first
/// sample), and the residue is normalized against S_k. Windows are then cut
/// with the same length/step. Residue rows are not zero-mean in this mode.
std::vector<CpiWindow> extract_cpi_ema(const RssiTrace& trace, double ema_weight,
                                       const PreprocessParams& params);

/// Mode dispatch per params.mode / sample rate.
std::vector<CpiWindow> preprocess_trace(const RssiTrace& trace, const PreprocessParams& params);

struct GapFillStats {
    std::size_t held_samples = 0;     ///< cells filled by holding the previous value
    std::size_t poisoned_samples = 0; ///< cells inside gaps too long to fill
};

/// Regularizes a trace onto its nominal sample grid: short gaps (fewer than
/// max_hold_gap missing intervals) are filled by holding the last value,
/// longer gaps are marked poisoned so the windower can drop affected CPIs.
/// Per-antenna NaN cells are treated the same way.
RssiTrace regularize_trace(const RssiTrace& trace, const PreprocessParams& params,
                           std::vector<bool>* poisoned_out = nullptr, GapFillStats* stats_out = nullptr);

}  // namespace wirssi
