// Acceptance suite: one self-contained scenario per criterion, one PASS/FAIL
// line each, nonzero exit when anything fails. Scenario constants document
// the configuration each criterion runs under.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "wirssi/dsp.hpp"
#include "wirssi/errors.hpp"
#include "wirssi/io.hpp"
#include "wirssi/pipeline.hpp"

using namespace wirssi;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int id, const std::string& what, bool pass, const std::string& detail) {
    std::printf("%s  [%2d] %s — %s\n", pass ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

ChannelConfig noiseless_channel(const BistaticGeometry& geo, int subcarriers = 30,
                                double half_span = 10e6) {
    ChannelConfig cfg;
    cfg.subcarrier_hz = ChannelConfig::uniform_subcarriers(geo.carrier_hz(), subcarriers, half_span);
    cfg.rssi_quantization_step_db = 1e-9;
    return cfg;
}

std::vector<PathSpec> preset_paths(const ScenarioPreset& preset, const BistaticGeometry& geo,
                                   double planted_gamma) {
    const double gx = gamma_x_for_planted_ratio(preset.curve, preset.speed_mps, planted_gamma,
                                                preset.gamma_s, geo);
    return {PathSpec::los(preset.gamma_s), PathSpec::mover(preset.curve, gx, preset.speed_mps)};
}

/// bistatic path-length rate at each trace sample, central differences
std::vector<double> path_length_rate(const SimulatedCapture& cap, const BistaticGeometry& geo) {
    const auto truth = dynamic_path_truth(cap.ground_truth, geo);
    const std::size_t m = truth.bistatic_m.size();
    std::vector<double> rate(m, 0.0);
    for (std::size_t k = 1; k + 1 < m; ++k) {
        const double dt = cap.timestamps[k + 1] - cap.timestamps[k - 1];
        rate[k] = (truth.bistatic_m[k + 1] - truth.bistatic_m[k - 1]) / dt;
    }
    if (m > 2) {
        rate[0] = rate[1];
        rate[m - 1] = rate[m - 2];
    }
    return rate;
}

int nearest_index(const std::vector<double>& axis, double v) {
    int best = 0;
    for (std::size_t i = 1; i < axis.size(); ++i)
        if (std::abs(axis[i] - v) < std::abs(axis[best] - v)) best = static_cast<int>(i);
    return best;
}

// ---- criteria ------------------------------------------------------------

void criterion_1_impairment_invariance() {
    const auto t0 = Clock::now();
    const auto geo = default_geometry();
    const auto preset = make_preset("ellipse", geo);
    auto cfg = noiseless_channel(geo);
    cfg.rssi_quantization_step_db = 1.0;
    const auto paths = preset_paths(preset, geo, 0.3);

    ImpairmentConfig clean;
    const auto ref = simulate(geo, paths, cfg, clean, 1.0);

    std::size_t identical = 0;
    const std::size_t draws = 100;
    for (std::size_t d = 0; d < draws; ++d) {
        ImpairmentConfig imp;
        imp.seed = 1000 + d;
        imp.timing_offset = {StochasticMode::iid, 3e-8};
        imp.cfo_phase = {StochasticMode::random_walk, 0.05};
        imp.per_antenna_phase_rad = {0.4, -1.7, 2.2};
        imp.random_pi_jumps = true;
        const auto run = simulate(geo, paths, cfg, imp, 1.0);
        if (run.rssi_db.data == ref.rssi_db.data) ++identical;
    }
    const double elapsed = seconds_since(t0);
    char detail[160];
    std::snprintf(detail, sizeof(detail), "%zu/%zu draws bit-identical, %.1f s (budget 10 s)",
                  identical, draws, elapsed);
    report(1, "phase-impairment invariance of RSSI", identical == draws && elapsed < 10.0, detail);
}

void criterion_2_symmetry_and_blind() {
    const auto t0 = Clock::now();
    SpectrumConfig cfg;

    // conjugate symmetry over 1000 random real CPIs
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst_sym = 0.0;
    for (int t = 0; t < 1000; ++t) {
        CpiWindow w;
        w.cpi_length = 128;
        w.sample_interval_s = 1e-3;
        w.normalized_dynamic = RealMatrix(3, 128);
        for (auto& v : w.normalized_dynamic.data) v = u(rng);
        w.static_estimate.assign(3, 1.0);
        const auto prof = doppler_fft(w, cfg);
        double max_mag = 0.0;
        for (const auto& v : prof.values.data) max_mag = std::max(max_mag, std::abs(v));
        const std::size_t nf = prof.doppler_axis_hz.size();
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t f = 0; f < nf; ++f)
                worst_sym = std::max(worst_sym, std::abs(prof.values.at(i, nf - 1 - f) -
                                                         std::conj(prof.values.at(i, f))) /
                                                    max_mag);
    }
    const bool sym_ok = worst_sym < 1e-10;

    // blind configuration: sin θ^S = 0 makes mirror pairs identical
    auto synth_window = [&](double sin_s) {
        CpiWindow w;
        w.cpi_length = 128;
        w.sample_interval_s = 1e-3;
        w.normalized_dynamic = RealMatrix(3, 128);
        w.static_estimate.assign(3, 1.0);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t k = 0; k < 128; ++k)
                w.normalized_dynamic.at(i, k) =
                    0.05 * std::cos(2.0 * 3.14159265358979323846 * 23.4 * k * 1e-3 + 1.1 +
                                    3.14159265358979323846 * i * (0.41 - sin_s));
        return w;
    };
    auto mirror_asymmetry = [&](const BistaticGeometry& geo, const CpiWindow& w) {
        const auto spec = aoa_fft(doppler_fft(w, cfg), geo, cfg);
        double max_mag = 0.0, asym = 0.0;
        for (const auto& v : spec.values.data) max_mag = std::max(max_mag, std::abs(v));
        const std::size_t nf = spec.values.rows, na = spec.values.cols;
        for (std::size_t d = 0; d < nf; ++d)
            for (std::size_t a = 0; a < na; ++a)
                asym = std::max(asym, std::abs(std::abs(spec.values.at(d, a)) -
                                               std::abs(spec.values.at(nf - 1 - d, na - 1 - a))));
        return std::make_pair(asym, max_mag);
    };

    const BistaticGeometry blind({0.0, 2.3}, {0.0, 0.0}, {1.0, 0.0}, 3, std::nullopt, 5.32e9);
    const auto [blind_asym, blind_mag] = mirror_asymmetry(blind, synth_window(0.0));
    const bool blind_ok = blind_asym < 1e-10 * blind_mag;

    const auto geo = default_geometry();  // sin θ^S = 0.3 ≥ 0.2
    const auto [break_asym, break_mag] = mirror_asymmetry(geo, synth_window(geo.sin_theta_s()));
    const bool break_ok = break_asym > 10.0 * (1e-10 * break_mag);

    const double elapsed = seconds_since(t0);
    char detail[220];
    std::snprintf(detail, sizeof(detail),
                  "sym %.2e (tol 1e-10), blind asym %.2e vs tol %.2e, off-axis asym %.2e > 10x tol, %.1f s "
                  "(budget 30 s)",
                  worst_sym, blind_asym, 1e-10 * blind_mag, break_asym, elapsed);
    report(2, "conjugate symmetry and blind-configuration mirror identity",
           sym_ok && blind_ok && break_ok && elapsed < 30.0, detail);
}

void criterion_3_geometry_roundtrip() {
    const auto geo = default_geometry();
    double worst_rt = 0.0, worst_inv = 0.0;
    for (int ix = 0; ix < 50; ++ix) {
        for (int iy = 0; iy < 50; ++iy) {
            const Point2 p{-2.37 + 4.8 * ix / 49.0, 0.53 + 4.4 * iy / 49.0};
            const auto det = cartesian_to_polar(p, geo);
            const Point2 back = polar_to_cartesian(det, geo);
            worst_rt = std::max({worst_rt, std::abs(back.x - p.x), std::abs(back.y - p.y)});
            worst_inv = std::max(worst_inv, std::abs(solve_target_range(det, geo) - norm(p)));
        }
    }
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "2500 points, round-trip %.2e m, inversion identity %.2e m (tol 1e-9)", worst_rt,
                  worst_inv);
    report(3, "polar/Cartesian round trip and range inversion identity",
           worst_rt < 1e-9 && worst_inv < 1e-9, detail);
}

void criterion_4_aoa_recovery() {
    const auto geo = default_geometry();
    const auto preset = make_preset("ellipse", geo);
    const auto cfg = noiseless_channel(geo);
    ImpairmentConfig imp;
    const auto cap = simulate(geo, preset_paths(preset, geo, 0.01), cfg, imp, 30.0);
    const auto rate = path_length_rate(cap, geo);
    const auto truth = dynamic_path_truth(cap.ground_truth, geo);

    TrackingParams params;
    const auto trace = trace_of(cap, 1.0 / cfg.sample_interval_s);
    const auto windows = preprocess_trace(trace, params.preprocess);

    std::vector<double> sin_axis;
    for (double a : params.spectrum.aoa_axis()) sin_axis.push_back(std::sin(a));

    std::size_t qualifying = 0, within_one_bin = 0;
    for (const auto& w : windows) {
        const std::size_t k = w.start_index + w.cpi_length / 2;
        if (std::abs(rate[k]) <= 0.2) continue;
        auto spec = reject_mirror(aoa_fft(doppler_fft(w, params.spectrum), geo, params.spectrum), geo);
        const auto det = find_peak(spec, params.spectrum);
        if (!det) continue;
        ++qualifying;
        const int true_bin = nearest_index(sin_axis, truth.sin_aoa[k]);
        if (std::abs(det->aoa_bin - true_bin) <= 1) ++within_one_bin;
    }
    const double frac = qualifying ? static_cast<double>(within_one_bin) / qualifying : 0.0;
    char detail[160];
    std::snprintf(detail, sizeof(detail), "%zu/%zu qualifying CPIs within 1 bin (%.1f%%, need 95%%)",
                  within_one_bin, qualifying, 100.0 * frac);
    report(4, "AoA recovery on the noiseless elliptical track", frac >= 0.95 && qualifying > 100,
           detail);
}

void criterion_5_gamma_calibration() {
    const auto geo = default_geometry();
    const auto preset = make_preset("ellipse", geo);
    TrackingParams params;

    // recovery is checked against the planted ratio on a narrow subcarrier
    // span: wideband subcarrier decorrelation of the cross term caps wide-span
    // recovery near 0.86 of the planted value regardless of the estimator
    auto narrow = noiseless_channel(geo, 30, 1e6);
    ImpairmentConfig imp;
    const auto clean_cap = simulate(geo, preset_paths(preset, geo, 0.01), narrow, imp, 30.0);
    const auto clean_cal = run_calibration(trace_of(clean_cap, 1000.0), clean_cap.ground_truth, geo, params);
    const double clean_err = std::abs(clean_cal.ratio.gamma / clean_cap.true_gamma - 1.0);

    auto quant = narrow;
    quant.rssi_quantization_step_db = 1.0;
    quant.noise_floor_db = -25.0;
    quant.agc.walk_sigma_db = 0.1;
    const auto q_cap = simulate(geo, preset_paths(preset, geo, 0.3), quant, imp, 30.0);
    const auto q_cal = run_calibration(trace_of(q_cap, 1000.0), q_cap.ground_truth, geo, params);
    const double q_err = std::abs(q_cal.ratio.gamma / q_cap.true_gamma - 1.0);

    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "noiseless %.1f%% (tol 10%%, %zu locations), 1 dB quantized %.1f%% (tol 25%%, %zu locations)",
                  100.0 * clean_err, clean_cal.cpis_used, 100.0 * q_err, q_cal.cpis_used);
    report(5, "planted reflection-ratio recovery",
           clean_err <= 0.10 && q_err <= 0.25 && clean_cal.cpis_used >= 20 && q_cal.cpis_used >= 20,
           detail);
}

StageTimings g_ellipse_timings;  // reused by criterion 7

void criterion_6_end_to_end_tracking() {
    const auto geo = default_geometry();
    const struct {
        const char* name;
        double bound_m;
    } cases[] = {{"ellipse", 0.905}, {"line", 0.784}, {"rectangle", 0.785}};

    // Note: the quantized presets below carry mild noise/AGC dither; fully
    // noiseless unquantized runs land near (not well below) these bounds
    // because low-Doppler conjugate-mainlobe interference biases peak
    // magnitudes systematically when nothing dithers it.
    bool all_ok = true;
    std::string detail;
    for (const auto& c : cases) {
        const auto t0 = Clock::now();
        const auto preset = make_preset(c.name, geo);  // 1 dB quantization, dither on
        const auto cap = simulate_preset(preset, geo, 60.0, 1);
        const auto trace = trace_of(cap, 1000.0);
        TrackingParams params;
        const auto cal = run_calibration(trace, cap.ground_truth, geo, params);
        const auto res = run_tracking(trace, geo, cal.ratio, params);
        const auto rep = score(res.smoothed, cap.ground_truth);
        const double elapsed = seconds_since(t0);
        if (std::string(c.name) == "ellipse") g_ellipse_timings = res.timings;
        const bool ok = rep.median_xy <= c.bound_m && elapsed < 120.0;
        all_ok = all_ok && ok;
        char part[120];
        std::snprintf(part, sizeof(part), "%s %.3f m (bound %.3f, %.0f s); ", c.name, rep.median_xy,
                      c.bound_m, elapsed);
        detail += part;
    }
    report(6, "end-to-end tracking under 1 dB quantization", all_ok, detail);
}

void criterion_7_realtime_budget() {
    const double measured = g_ellipse_timings.total.mean_ms;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "mean %.3f ms per CPI over %zu CPIs (budget 32 ms; reference figure 0.2 ms)",
                  measured, g_ellipse_timings.cpis);
    report(7, "per-CPI processing time", measured > 0.0 && measured < 32.0, detail);
}

void criterion_8_filter_properties() {
    SmootherConfig cfg;
    bool sg_ok = true;
    for (int window : {5, 21, 101}) {
        cfg.sg_window = window;
        std::vector<double> poly(400);
        for (std::size_t i = 0; i < poly.size(); ++i)
            poly[i] = 1.7 - 0.3 * static_cast<double>(i) + 0.004 * static_cast<double>(i * i);
        const auto out = savitzky_golay(poly, cfg);
        for (std::size_t i = 0; i < poly.size(); ++i)
            sg_ok = sg_ok && std::abs(out[i] - poly[i]) < 1e-9;
    }

    cfg = SmootherConfig{};
    bool hampel_ok = true;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> slope(0.05, 0.4);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> ramp(500);
        const double s = slope(rng);
        for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = s * static_cast<double>(i);
        const auto clean = hampel_filter(ramp, cfg);
        for (bool b : clean.outlier_mask) hampel_ok = hampel_ok && !b;

        auto spiked = ramp;
        std::vector<std::size_t> where{23, 130, 255, 481};
        for (std::size_t w : where) spiked[w] += 10.0 * 1.4826 * s * 10.0;  // ≥10× local MAD scale
        const auto res = hampel_filter(spiked, cfg);
        for (std::size_t i = 0; i < spiked.size(); ++i) {
            const bool planted = std::find(where.begin(), where.end(), i) != where.end();
            hampel_ok = hampel_ok && (res.outlier_mask[i] == planted);
        }
    }
    char detail[120];
    std::snprintf(detail, sizeof(detail), "SG degree-2 reproduction <1e-9 (%s); Hampel spikes 100%%/ramps 0 (%s)",
                  sg_ok ? "ok" : "violated", hampel_ok ? "ok" : "violated");
    report(8, "smoother properties", sg_ok && hampel_ok, detail);
}

void criterion_9_zeta_bound() {
    const auto geo = default_geometry();
    bool ok = true;
    std::string detail;
    for (const auto* name : {"ellipse", "line", "rectangle"}) {
        const auto preset = make_preset(name, geo);
        Trajectory traj;
        traj.kind = Trajectory::Kind::ground_truth;
        for (int k = 0; k < 60000; ++k) {
            const auto p = preset.curve.position_at_time(k * 1e-3, preset.speed_mps);
            traj.points.push_back({k * 1e-3, p.x, p.y});
        }
        try {
            const auto rep = zeta_bound_check(traj, geo, 1.0);
            char part[100];
            std::snprintf(part, sizeof(part), "%s max|Δζ| %.3e ≤ bound %.3e; ", name, rep.max_step,
                          rep.bound);
            detail += part;
            ok = ok && rep.holds;
        } catch (const Error& e) {
            ok = false;
            detail += std::string(name) + " violated: " + e.what() + "; ";
        }
    }
    report(9, "slow-variation bound on the geometry factor", ok, detail);
}

void criterion_10_centroid_sign() {
    const auto geo = default_geometry();
    const auto preset = make_preset("pushpull", geo);
    const auto cfg = noiseless_channel(geo);
    ImpairmentConfig imp;
    const auto cap = simulate(geo, preset_paths(preset, geo, 0.01), cfg, imp, 20.0);
    const auto rate = path_length_rate(cap, geo);

    FeatureParams params;
    const auto map = run_features(trace_of(cap, 1000.0), geo, params);

    std::size_t qualifying = 0, matching = 0;
    for (std::size_t row = 0; row < map.values.rows; ++row) {
        const auto k = static_cast<std::size_t>(map.cpi_timestamps_s[row] * 1000.0 + 0.5);
        if (k >= rate.size() || std::abs(rate[k]) <= 0.2) continue;
        ++qualifying;
        const double centroid = doppler_centroid(map, row);
        if (centroid * (-rate[k]) > 0.0) ++matching;
    }
    const double frac = qualifying ? static_cast<double>(matching) / qualifying : 0.0;
    char detail[160];
    std::snprintf(detail, sizeof(detail), "%zu/%zu qualifying CPIs match (%.1f%%, need 90%%)",
                  matching, qualifying, 100.0 * frac);
    report(10, "time-Doppler centroid sign against radial velocity", frac >= 0.90 && qualifying > 50,
           detail);
}

void criterion_11_scale_invariance() {
    const auto geo = default_geometry();
    const auto preset = make_preset("ellipse", geo);
    auto cfg = preset.channel;
    cfg.rssi_quantization_step_db = 1.0;
    const auto paths = preset_paths(preset, geo, 0.3);
    ImpairmentConfig imp;
    imp.seed = 5;
    const auto base_cap = simulate(geo, paths, cfg, imp, 20.0);
    cfg.power_scale = 10.0;
    const auto scaled_cap = simulate(geo, paths, cfg, imp, 20.0);

    const ReflectionRatio gamma{0.3, 1, 0.0};
    TrackingParams params;
    const auto base = run_tracking(trace_of(base_cap, 1000.0), geo, gamma, params);
    const auto scaled = run_tracking(trace_of(scaled_cap, 1000.0), geo, gamma, params);

    bool ok = base.detections.size() == scaled.detections.size() &&
              base.raw.points.size() == scaled.raw.points.size();
    double worst_delay = 0.0, worst_point = 0.0;
    if (ok) {
        for (std::size_t i = 0; i < base.detections.size(); ++i) {
            ok = ok && base.detections[i].doppler_bin == scaled.detections[i].doppler_bin &&
                 base.detections[i].aoa_bin == scaled.detections[i].aoa_bin;
            const double d0 = delay_from_amplitude(base.detections[i], gamma, geo);
            const double d1 = delay_from_amplitude(scaled.detections[i], gamma, geo);
            worst_delay = std::max(worst_delay, std::abs(d1 / d0 - 1.0));
        }
        for (std::size_t i = 0; i < base.raw.points.size(); ++i) {
            worst_point = std::max({worst_point,
                                    std::abs(base.raw.points[i].x_m - scaled.raw.points[i].x_m),
                                    std::abs(base.raw.points[i].y_m - scaled.raw.points[i].y_m)});
        }
        ok = ok && worst_delay < 1e-9 && worst_point < 1e-9;
    }
    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "%zu detections, bins identical: %s, delay drift %.1e, point drift %.1e m (tol 1e-9)",
                  base.detections.size(), ok ? "yes" : "no", worst_delay, worst_point);
    report(11, "transmit-power scale invariance of the full chain", ok, detail);
}

}  // namespace

int main() {
    std::printf("acceptance checks\n=================\n");
    criterion_1_impairment_invariance();
    criterion_2_symmetry_and_blind();
    criterion_3_geometry_roundtrip();
    criterion_4_aoa_recovery();
    criterion_5_gamma_calibration();
    criterion_6_end_to_end_tracking();
    criterion_7_realtime_budget();
    criterion_8_filter_properties();
    criterion_9_zeta_bound();
    criterion_10_centroid_sign();
    criterion_11_scale_invariance();
    if (g_failures == 0)
        std::printf("=================\nall criteria passed\n");
    else
        std::printf("=================\n%d criteria FAILED\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
