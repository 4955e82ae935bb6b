#include "wirssi/preprocess.hpp"

#include <cmath>
#include <limits>

#include "wirssi/errors.hpp"

namespace wirssi {

void RssiTrace::validate() const {
    if (timestamps.size() != samples_db.cols)
        throw DataError("trace: timestamp count does not match sample columns");
    if (samples_db.rows == 0 || samples_db.cols == 0) throw DataError("trace: empty");
    if (!(sample_rate_hz > 0.0)) throw DataError("trace: sample rate must be positive");
    for (std::size_t k = 1; k < timestamps.size(); ++k)
        if (!(timestamps[k] > timestamps[k - 1])) throw DataError("trace: timestamps must be strictly increasing");
}

void PreprocessParams::validate() const {
    if (cpi_length < 2) throw ConfigError("preprocess: CPI length must be >= 2");
    if (cpi_step < 1) throw ConfigError("preprocess: CPI step must be >= 1");
    if (!(ema_weight > 0.0 && ema_weight < 1.0)) throw ConfigError("preprocess: EMA weight must be in (0, 1)");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

namespace {

CpiWindow cut_window(const RealMatrix& linear, const std::vector<double>& ts, double dt,
                     std::size_t start, std::size_t m) {
    CpiWindow w;
    w.start_index = start;
    w.cpi_length = m;
    w.sample_interval_s = dt;
    w.timestamp_s = ts[start + m / 2];
    const std::size_t n = linear.rows;
    w.normalized_dynamic = RealMatrix(n, m);
    w.static_estimate.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double mean = 0.0;
        for (std::size_t k = 0; k < m; ++k) mean += linear.at(i, start + k);
        mean /= static_cast<double>(m);
        if (!(mean > 0.0)) throw ZeroStaticPower("extract_cpi: nonpositive window mean");
        w.static_estimate[i] = mean;
        for (std::size_t k = 0; k < m; ++k)
            w.normalized_dynamic.at(i, k) = (linear.at(i, start + k) - mean) / mean;
    }
    return w;
}

RealMatrix to_linear(const RssiTrace& trace) {
    RealMatrix lin(trace.samples_db.rows, trace.samples_db.cols);
    for (std::size_t i = 0; i < lin.data.size(); ++i) lin.data[i] = db_to_linear(trace.samples_db.data[i]);
    return lin;
}

}  // namespace

CpiWindow extract_cpi(const RssiTrace& trace, std::size_t start, std::size_t cpi_length) {
    trace.validate();
    if (start + cpi_length > trace.samples_db.cols) throw DataError("extract_cpi: window exceeds trace length");
    if (cpi_length < 2) throw ConfigError("extract_cpi: CPI length must be >= 2");
    return cut_window(to_linear(trace), trace.timestamps, 1.0 / trace.sample_rate_hz, start, cpi_length);
}

std::vector<CpiWindow> make_cpi_windows(const RssiTrace& trace, const PreprocessParams& params) {
    trace.validate();
    params.validate();
    std::vector<CpiWindow> out;
    if (trace.samples_db.cols < params.cpi_length) return out;
    const RealMatrix lin = to_linear(trace);
    const double dt = 1.0 / trace.sample_rate_hz;
    for (std::size_t s = 0; s + params.cpi_length <= trace.samples_db.cols; s += params.cpi_step)
        out.push_back(cut_window(lin, trace.timestamps, dt, s, params.cpi_length));
    return out;
}

std::vector<CpiWindow> extract_cpi_ema(const RssiTrace& trace, double ema_weight,
                                       const PreprocessParams& params) {
    trace.validate();
    params.validate();
    if (!(ema_weight > 0.0 && ema_weight < 1.0)) throw ConfigError("extract_cpi_ema: weight must be in (0, 1)");

    const RealMatrix lin = to_linear(trace);
    const std::size_t n = lin.rows, mt = lin.cols;
    RealMatrix residue(n, mt);
    RealMatrix smoothed(n, mt);
    for (std::size_t i = 0; i < n; ++i) {
        double s = lin.at(i, 0);
        for (std::size_t k = 0; k < mt; ++k) {
            s = ema_weight * lin.at(i, k) + (1.0 - ema_weight) * s;
            if (!(s > 0.0)) throw ZeroStaticPower("extract_cpi_ema: nonpositive static estimate");
            smoothed.at(i, k) = s;
            residue.at(i, k) = (lin.at(i, k) - s) / s;
        }
    }

    std::vector<CpiWindow> out;
    if (mt < params.cpi_length) return out;
    const double dt = 1.0 / trace.sample_rate_hz;
    for (std::size_t s0 = 0; s0 + params.cpi_length <= mt; s0 += params.cpi_step) {
        CpiWindow w;
        w.start_index = s0;
        w.cpi_length = params.cpi_length;
        w.sample_interval_s = dt;
        w.timestamp_s = trace.timestamps[s0 + params.cpi_length / 2];
        w.normalized_dynamic = RealMatrix(n, params.cpi_length);
        w.static_estimate.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t k = 0; k < params.cpi_length; ++k) {
                w.normalized_dynamic.at(i, k) = residue.at(i, s0 + k);
                acc += smoothed.at(i, s0 + k);
            }
            w.static_estimate[i] = acc / static_cast<double>(params.cpi_length);
        }
        out.push_back(std::move(w));
    }
    return out;
}

std::vector<CpiWindow> preprocess_trace(const RssiTrace& trace, const PreprocessParams& params) {
    const bool use_ema = params.mode == ClutterMode::ema ||
                         (params.mode == ClutterMode::auto_select &&
                          trace.sample_rate_hz < params.ema_rate_threshold_hz);
    return use_ema ? extract_cpi_ema(trace, params.ema_weight, params) : make_cpi_windows(trace, params);
}

RssiTrace regularize_trace(const RssiTrace& trace, const PreprocessParams& params,
                           std::vector<bool>* poisoned_out, GapFillStats* stats_out) {
    if (trace.samples_db.rows == 0 || trace.samples_db.cols == 0) throw DataError("trace: empty");
    const double dt = 1.0 / trace.sample_rate_hz;
    const std::size_t n = trace.samples_db.rows;

    // place every sample on the nominal grid anchored at the first timestamp
    const double t0 = trace.timestamps.front();
    const std::size_t total =
        static_cast<std::size_t>(std::floor((trace.timestamps.back() - t0) / dt + 0.5)) + 1;

    RssiTrace out;
    out.sample_rate_hz = trace.sample_rate_hz;
    out.timestamps.resize(total);
    out.samples_db = RealMatrix(n, total, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t k = 0; k < total; ++k) out.timestamps[k] = t0 + static_cast<double>(k) * dt;
    for (std::size_t c = 0; c < trace.timestamps.size(); ++c) {
        const auto slot = static_cast<std::size_t>(std::floor((trace.timestamps[c] - t0) / dt + 0.5));
        if (slot >= total) continue;
        for (std::size_t i = 0; i < n; ++i) out.samples_db.at(i, slot) = trace.samples_db.at(i, c);
    }

    GapFillStats stats;
    std::vector<bool> poisoned(total, false);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t k = 0;
        while (k < total) {
            if (!std::isnan(out.samples_db.at(i, k))) {
                ++k;
                continue;
            }
            std::size_t end = k;
            while (end < total && std::isnan(out.samples_db.at(i, end))) ++end;
            const std::size_t gap = end - k;
            if (k > 0 && gap < params.max_hold_gap) {
                for (std::size_t g = k; g < end; ++g) out.samples_db.at(i, g) = out.samples_db.at(i, k - 1);
                stats.held_samples += gap;
            } else {
                for (std::size_t g = k; g < end; ++g) {
                    poisoned[g] = true;
                    // keep a finite placeholder so downstream math stays NaN-free
                    out.samples_db.at(i, g) = k > 0 ? out.samples_db.at(i, k - 1) : 0.0;
                }
                stats.poisoned_samples += gap;
            }
            k = end;
        }
    }
    if (poisoned_out) *poisoned_out = std::move(poisoned);
    if (stats_out) *stats_out = stats;
    return out;
}

}  // namespace wirssi
