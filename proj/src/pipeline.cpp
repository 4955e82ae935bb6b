#include "wirssi/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "wirssi/dsp.hpp"
#include "wirssi/errors.hpp"

namespace wirssi {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

StageTimings::Stat stat_of(std::vector<double>& samples) {
    StageTimings::Stat s;
    if (samples.empty()) return s;
    s.mean_ms = dsp::mean(samples);
    s.p99_ms = dsp::quantile(samples, 0.99);
    return s;
}

std::vector<bool> window_poison_flags(const std::vector<CpiWindow>& windows,
                                      const std::vector<bool>& poisoned) {
    std::vector<bool> bad(windows.size(), false);
    if (poisoned.empty()) return bad;
    for (std::size_t w = 0; w < windows.size(); ++w) {
        const std::size_t s0 = windows[w].start_index;
        for (std::size_t k = 0; k < windows[w].cpi_length; ++k) {
            if (poisoned[s0 + k]) {
                bad[w] = true;
                break;
            }
        }
    }
    return bad;
}

std::optional<Point2> interpolate_truth(const Trajectory& truth, double t) {
    const auto& tp = truth.points;
    if (tp.empty() || t < tp.front().t_s || t > tp.back().t_s) return std::nullopt;
    const auto it = std::lower_bound(tp.begin(), tp.end(), t,
                                     [](const TrajectoryPoint& p, double x) { return p.t_s < x; });
    if (it == tp.begin()) return Point2{it->x_m, it->y_m};
    const auto& b = *it;
    const auto& a = *(it - 1);
    const double span = b.t_s - a.t_s;
    const double f = span > 0.0 ? (t - a.t_s) / span : 0.0;
    return Point2{a.x_m + f * (b.x_m - a.x_m), a.y_m + f * (b.y_m - a.y_m)};
}

}  // namespace

TrackResult run_tracking(const RssiTrace& raw_trace, const BistaticGeometry& geo,
                         const ReflectionRatio& gamma, const TrackingParams& params) {
    params.preprocess.validate();
    params.spectrum.validate(geo.num_antennas());
    params.smoother.validate();

    TrackResult res;
    std::vector<bool> poisoned;
    const RssiTrace trace = regularize_trace(raw_trace, params.preprocess, &poisoned, &res.gaps);

    std::vector<double> t_pre, t_spec, t_rng, t_tot;
    auto t0 = Clock::now();
    const std::vector<CpiWindow> windows = preprocess_trace(trace, params.preprocess);
    const double pre_total = ms_since(t0);
    const auto bad = window_poison_flags(windows, poisoned);

    std::vector<Detection> detections;
    std::vector<double> delays;
    res.cpis_total = windows.size();
    // per-window mean of the bulk preprocessing (windows are cut in one pass)
    const double pre_each = windows.empty() ? 0.0 : pre_total / static_cast<double>(windows.size());

    for (std::size_t w = 0; w < windows.size(); ++w) {
        if (bad[w]) {
            ++res.cpis_no_target;
            continue;
        }
        const auto t_start = Clock::now();
        const DopplerProfiles prof = doppler_fft(windows[w], params.spectrum);
        DopplerAoaSpectrum spec = aoa_fft(prof, geo, params.spectrum);
        spec = reject_mirror(std::move(spec), geo);
        const auto det = find_peak(spec, params.spectrum);
        const double spec_ms = ms_since(t_start);
        t_spec.push_back(spec_ms);

        if (!det) {
            ++res.cpis_no_target;
            t_pre.push_back(pre_each);
            t_tot.push_back(pre_each + spec_ms);
            continue;
        }
        const auto t_rng0 = Clock::now();
        double delay = 0.0;
        bool ok = true;
        try {
            delay = delay_from_amplitude(*det, gamma, geo);
        } catch (const Error&) {
            ++res.drops_range;
            ok = false;
        }
        const double rng_ms = ms_since(t_rng0);
        t_rng.push_back(rng_ms);
        t_pre.push_back(pre_each);
        t_tot.push_back(pre_each + spec_ms + rng_ms);
        if (ok) {
            detections.push_back(*det);
            delays.push_back(delay);
        }
    }

    LocalizeResult loc = localize(detections, delays, geo, params.max_bistatic_range_m);
    res.drops_range += loc.dropped;
    res.raw = std::move(loc.trajectory);
    res.detections = std::move(detections);
    if (!res.raw.points.empty()) res.smoothed = smooth_trajectory(res.raw, params.smoother);
    res.smoothed.kind = Trajectory::Kind::smoothed;

    res.timings.preprocess = stat_of(t_pre);
    res.timings.spectrum = stat_of(t_spec);
    res.timings.ranging = stat_of(t_rng);
    res.timings.total = stat_of(t_tot);
    res.timings.cpis = windows.size();
    return res;
}

CalibrationRunResult run_calibration(const RssiTrace& raw_trace, const Trajectory& truth,
                                     const BistaticGeometry& geo, const TrackingParams& params) {
    params.preprocess.validate();
    params.spectrum.validate(geo.num_antennas());
    if (truth.points.empty()) throw DataError("calibration: empty truth trajectory");

    std::vector<bool> poisoned;
    GapFillStats gaps;
    const RssiTrace trace = regularize_trace(raw_trace, params.preprocess, &poisoned, &gaps);
    const std::vector<CpiWindow> windows = preprocess_trace(trace, params.preprocess);
    const auto bad = window_poison_flags(windows, poisoned);

    bool any_overlap = false;
    std::vector<CalibrationSample> samples;
    for (std::size_t w = 0; w < windows.size(); ++w) {
        if (bad[w]) continue;
        const auto pos = interpolate_truth(truth, windows[w].timestamp_s);
        if (!pos) continue;
        any_overlap = true;
        const DopplerProfiles prof = doppler_fft(windows[w], params.spectrum);
        DopplerAoaSpectrum spec = reject_mirror(aoa_fft(prof, geo, params.spectrum), geo);
        const auto det = find_peak(spec, params.spectrum);
        if (!det || det->peak_magnitude <= kMagnitudeFloor) continue;
        samples.push_back({det->peak_magnitude, *pos, windows[w].timestamp_s});
    }
    if (!any_overlap) throw NoTemporalOverlap("calibration: truth does not cover the trace in time");
    if (samples.size() < 5) throw InsufficientDetections("calibration: fewer than 5 usable CPIs");

    CalibrationRunResult out;
    out.ratio = calibrate_gamma(samples, geo);
    out.median_gamma = calibration_median(samples, geo);
    out.cpis_used = samples.size();
    return out;
}

TimeDopplerMap run_features(const RssiTrace& raw_trace, const BistaticGeometry& geo,
                            const FeatureParams& params) {
    params.preprocess.validate();
    params.spectrum.validate(geo.num_antennas());
    std::vector<bool> poisoned;
    GapFillStats gaps;
    const RssiTrace trace = regularize_trace(raw_trace, params.preprocess, &poisoned, &gaps);
    const std::vector<CpiWindow> windows = preprocess_trace(trace, params.preprocess);
    const auto bad = window_poison_flags(windows, poisoned);

    std::vector<DopplerProfileRow> rows;
    rows.reserve(windows.size());
    for (std::size_t w = 0; w < windows.size(); ++w) {
        if (bad[w]) continue;
        const DopplerProfiles prof = doppler_fft(windows[w], params.spectrum);
        DopplerAoaSpectrum spec = aoa_fft(prof, geo, params.spectrum);
        if (params.reject_mirror) spec = reject_mirror(std::move(spec), geo);
        rows.push_back(profile_of(spec));
    }
    return stack_time_doppler(rows);
}

BistaticGeometry default_geometry() {
    const double d_s = 2.3;
    const double sin_s = 0.3;
    return BistaticGeometry({d_s * sin_s, d_s * std::sqrt(1.0 - sin_s * sin_s)}, {0.0, 0.0}, {1.0, 0.0},
                            3, std::nullopt, 5.32e9);
}

double gamma_x_for_planted_ratio(const PathCurve& curve, double speed_mps, double planted_gamma,
                                 double gamma_s, const BistaticGeometry& geo) {
    // mean ζ over one traversal period (one lap closed, out-and-back open)
    const double period = (curve.closed() ? 1.0 : 2.0) * curve.perimeter() / speed_mps;
    const int samples = 4096;
    double acc = 0.0;
    for (int k = 0; k < samples; ++k) {
        const Point2 p = curve.position_at_time(period * k / samples, speed_mps);
        acc += kSpeedOfLight / distance(p, geo.tx_local()) + kSpeedOfLight / norm(p);
    }
    const double mean_zeta = acc / samples;
    return planted_gamma * gamma_s / mean_zeta;
}

ScenarioPreset make_preset(const std::string& name, const BistaticGeometry& geo) {
    auto curve = [&]() -> PathCurve {
        if (name == "ellipse") return PathCurve::ellipse({2.9, 3.0}, 0.8, 0.6);
        if (name == "line") return PathCurve::line({2.2, 2.5}, {3.4, 3.4});
        if (name == "rectangle") return PathCurve::rectangle({2.6, 2.6}, 1.4, 1.0);
        if (name == "pushpull") return PathCurve::line({2.2, 2.2}, {3.0, 3.0});
        throw ConfigError("unknown preset '" + name + "' (ellipse, line, rectangle, pushpull)");
    }();
    ScenarioPreset p{name, std::move(curve), 1.0, 0.3, 1e-7, ChannelConfig{}};
    p.channel.subcarrier_hz = ChannelConfig::uniform_subcarriers(geo.carrier_hz());
    p.channel.sample_interval_s = 1e-3;
    p.channel.noise_floor_db = -25.0;  // mild dither against the 1 dB quantizer
    p.channel.agc.walk_sigma_db = 0.1;
    return p;
}

SimulatedCapture simulate_preset(const ScenarioPreset& preset, const BistaticGeometry& geo,
                                 double duration_s, std::uint64_t seed) {
    const double gx =
        gamma_x_for_planted_ratio(preset.curve, preset.speed_mps, preset.planted_gamma, preset.gamma_s, geo);
    std::vector<PathSpec> paths{PathSpec::los(preset.gamma_s),
                                PathSpec::mover(preset.curve, gx, preset.speed_mps)};
    ImpairmentConfig imp;
    imp.seed = seed;
    return simulate(geo, paths, preset.channel, imp, duration_s);
}

RssiTrace trace_of(const SimulatedCapture& capture, double sample_rate_hz) {
    RssiTrace t;
    t.timestamps = capture.timestamps;
    t.samples_db = capture.rssi_db;
    t.sample_rate_hz = sample_rate_hz;
    return t;
}

}  // namespace wirssi
