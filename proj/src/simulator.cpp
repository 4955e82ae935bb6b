#include "wirssi/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wirssi/errors.hpp"
#include "wirssi/rng.hpp"

namespace wirssi {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// stream ids for seed splitting
enum StreamId : std::uint64_t {
    kStreamTiming = 1,
    kStreamCfo = 2,
    kStreamPhaseOffsets = 3,
    kStreamAgc = 4,
    kStreamNoiseBase = 100,  // + antenna index
};

std::vector<double> draw_series(Rng rng, const StochasticSpec& spec, std::size_t n) {
    std::vector<double> out(n, 0.0);
    if (spec.mode == StochasticMode::off || spec.sigma == 0.0) return out;
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double d = spec.sigma * rng.normal();
        if (spec.mode == StochasticMode::iid) {
            out[k] = d;
        } else {
            acc += d;
            out[k] = acc;
        }
    }
    return out;
}

}  // namespace

std::vector<double> ChannelConfig::uniform_subcarriers(double carrier_hz, int count, double half_span_hz) {
    if (count < 1) throw ConfigError("subcarrier count must be >= 1");
    std::vector<double> f(count);
    if (count == 1) {
        f[0] = carrier_hz;
        return f;
    }
    for (int j = 0; j < count; ++j)
        f[j] = carrier_hz - half_span_hz + 2.0 * half_span_hz * j / (count - 1);
    return f;
}

void ChannelConfig::validate() const {
    if (subcarrier_hz.empty()) throw ConfigError("channel: at least one subcarrier required");
    if (!(sample_interval_s > 0.0)) throw ConfigError("channel: sample interval must be positive");
    if (!(power_scale > 0.0)) throw ConfigError("channel: power scale must be positive");
    if (!(agc.initial_gain > 0.0)) throw ConfigError("channel: AGC gain must be positive");
    if (agc.block_samples < 1) throw ConfigError("channel: AGC block must be >= 1 sample");
    if (!(rssi_quantization_step_db > 0.0)) throw ConfigError("channel: quantization step must be positive");
    if (!(rssi_clamp_min_db < rssi_clamp_max_db)) throw ConfigError("channel: empty RSSI clamp range");
}

PathSpec PathSpec::los(double gamma_s) {
    PathSpec p;
    p.kind = Kind::static_path;
    p.amplitude_coefficient = gamma_s;
    return p;
}

PathSpec PathSpec::mover(PathCurve curve, double gamma_x, double speed_mps) {
    PathSpec p;
    p.kind = Kind::dynamic_path;
    p.amplitude_coefficient = gamma_x;
    p.curve = std::move(curve);
    p.speed_mps = speed_mps;
    return p;
}

CsiTensor synthesize_csi(const BistaticGeometry& geo, const std::vector<PathSpec>& paths,
                         const ChannelConfig& cfg, const ImpairmentConfig& imp, double duration_s,
                         double min_clearance_m) {
    return simulate(geo, paths, cfg, imp, duration_s, min_clearance_m).csi;
}

SimulatedCapture simulate(const BistaticGeometry& geo, const std::vector<PathSpec>& paths,
                          const ChannelConfig& cfg, const ImpairmentConfig& imp, double duration_s,
                          double min_clearance_m) {
    cfg.validate();
    const std::size_t n_static =
        std::count_if(paths.begin(), paths.end(), [](const PathSpec& p) { return p.kind == PathSpec::Kind::static_path; });
    const std::size_t n_dyn = paths.size() - n_static;
    if (n_static == 0) throw ConfigError("simulate: at least one static path (the LOS) is required");
    if (n_dyn > 1) throw ConfigError("simulate: at most one dynamic path is supported");
    for (const auto& p : paths) {
        if (!(p.amplitude_coefficient > 0.0)) throw ConfigError("simulate: amplitude coefficients must be positive");
        if (p.kind == PathSpec::Kind::dynamic_path && !p.curve)
            throw ConfigError("simulate: dynamic path needs a trajectory curve");
    }

    const std::size_t N = static_cast<std::size_t>(geo.num_antennas());
    const std::size_t L = cfg.subcarrier_hz.size();
    const std::size_t M = static_cast<std::size_t>(std::floor(duration_s / cfg.sample_interval_s + 0.5));
    if (M == 0) throw ConfigError("simulate: duration shorter than one sample");

    SimulatedCapture cap;
    cap.timestamps.resize(M);
    for (std::size_t k = 0; k < M; ++k) cap.timestamps[k] = static_cast<double>(k) * cfg.sample_interval_s;

    // impairment draws
    Rng root(imp.seed);
    const auto timing = draw_series(root.split(kStreamTiming), imp.timing_offset, M);
    const auto cfo = draw_series(root.split(kStreamCfo), imp.cfo_phase, M);
    std::vector<double> po(N, 0.0);
    for (std::size_t i = 0; i < std::min(N, imp.per_antenna_phase_rad.size()); ++i)
        po[i] = imp.per_antenna_phase_rad[i];
    if (!imp.per_antenna_phase_rad.empty() && imp.per_antenna_phase_rad.size() != N)
        throw ConfigError("simulate: per-antenna phase offset list must have one entry per antenna");
    if (imp.random_pi_jumps) {
        Rng jumps = root.split(kStreamPhaseOffsets);
        for (std::size_t i = 0; i < N; ++i)
            if (jumps.uniform() < 0.5) po[i] += std::numbers::pi;
    }

    // AGC gain per sample, piecewise-constant per block
    std::vector<double> alpha(M, cfg.agc.initial_gain);
    if (cfg.agc.walk_sigma_db > 0.0) {
        Rng agc_rng = root.split(kStreamAgc);
        double gain_db = 0.0;
        for (std::size_t start = 0; start < M; start += static_cast<std::size_t>(cfg.agc.block_samples)) {
            const double g = cfg.agc.initial_gain * std::pow(10.0, gain_db / 20.0);
            const std::size_t stop = std::min(M, start + static_cast<std::size_t>(cfg.agc.block_samples));
            for (std::size_t k = start; k < stop; ++k) alpha[k] = g;
            gain_db += cfg.agc.walk_sigma_db * agc_rng.normal();
        }
    }

    // dynamic path ground truth
    const PathSpec* dyn = nullptr;
    for (const auto& p : paths)
        if (p.kind == PathSpec::Kind::dynamic_path) dyn = &p;

    std::vector<double> tau1(M), tau2(M), sinx(M), zeta(M);
    if (dyn) {
        cap.ground_truth.kind = Trajectory::Kind::ground_truth;
        cap.ground_truth.points.resize(M);
        if (dyn->curve->min_distance_to(geo.tx_local()) < min_clearance_m ||
            dyn->curve->min_distance_to(Point2{0.0, 0.0}) < min_clearance_m)
            throw ConfigError("simulate: dynamic trajectory violates the minimum terminal clearance");
        double zeta_sum = 0.0;
        for (std::size_t k = 0; k < M; ++k) {
            const Point2 p = dyn->curve->position_at_time(cap.timestamps[k], dyn->speed_mps);
            cap.ground_truth.points[k] = {cap.timestamps[k], p.x, p.y};
            const double d1 = distance(p, geo.tx_local());
            const double d2 = norm(p);
            tau1[k] = d1 / kSpeedOfLight;
            tau2[k] = d2 / kSpeedOfLight;
            sinx[k] = p.x / d2;
            zeta[k] = 1.0 / tau1[k] + 1.0 / tau2[k];
            zeta_sum += zeta[k];
        }
        // planted ratio, defined against the LOS static coefficient
        double gamma_s_los = 0.0;
        for (const auto& p : paths)
            if (p.kind == PathSpec::Kind::static_path && !p.fixed_delay_s) {
                gamma_s_los = p.amplitude_coefficient;
                break;
            }
        if (gamma_s_los > 0.0)
            cap.true_gamma = (zeta_sum / static_cast<double>(M)) * dyn->amplitude_coefficient / gamma_s_los;
    }

    // static frequency response, fixed over time: H^S[i][j]
    ComplexMatrix hs(N, L);
    for (const auto& p : paths) {
        if (p.kind != PathSpec::Kind::static_path) continue;
        const double tau = p.fixed_delay_s.value_or(geo.baseline_delay_s());
        if (!(tau > 0.0)) throw ConfigError("simulate: static path delay must be positive");
        const double rho = p.amplitude_coefficient / tau;
        const double sin_a = std::sin(p.aoa_rad.value_or(geo.theta_s_rad()));
        for (std::size_t i = 0; i < N; ++i) {
            const double array_ph = std::numbers::pi * static_cast<double>(i) * sin_a;
            for (std::size_t j = 0; j < L; ++j) {
                const double ph = kTwoPi * cfg.subcarrier_hz[j] * tau + array_ph;
                hs.at(i, j) += rho * std::complex<double>(std::cos(ph), -std::sin(ph));
            }
        }
    }

    const bool with_noise = cfg.noise_floor_db > -250.0;
    const double noise_sigma = with_noise ? std::sqrt(std::pow(10.0, cfg.noise_floor_db / 10.0) / 2.0) : 0.0;

    cap.csi = CsiTensor(N, L, M);
    for (std::size_t i = 0; i < N; ++i) {
        Rng noise_rng = root.split(kStreamNoiseBase + i);
        for (std::size_t j = 0; j < L; ++j) {
            const double fj = cfg.subcarrier_hz[j];
            for (std::size_t k = 0; k < M; ++k) {
                std::complex<double> h = hs.at(i, j);
                if (dyn) {
                    const double taux = tau1[k] + tau2[k];
                    const double rho = dyn->amplitude_coefficient / (tau1[k] * tau2[k]);
                    const double ph = kTwoPi * fj * taux + std::numbers::pi * static_cast<double>(i) * sinx[k];
                    h += rho * std::complex<double>(std::cos(ph), -std::sin(ph));
                }
                if (with_noise)
                    h += std::complex<double>(noise_sigma * noise_rng.normal(), noise_sigma * noise_rng.normal());
                // clock/hardware phase rotations cancel in |CSI|²; noise rides
                // inside the bracket (circular, so statistically equivalent)
                const double dist = kTwoPi * fj * timing[k] + cfo[k] + po[i];
                const std::complex<double> rot(std::cos(dist), -std::sin(dist));
                cap.csi.at(i, j, k) = alpha[k] * rot * h;
            }
        }
    }

    cap.rssi_db = derive_rssi(cap.csi, cfg);
    return cap;
}

RealMatrix derive_rssi(const CsiTensor& csi, const ChannelConfig& cfg) {
    if (csi.data.empty()) throw DataError("derive_rssi: empty CSI tensor");
    const double step = cfg.rssi_quantization_step_db;
    RealMatrix out(csi.n_antennas, csi.n_samples);
    for (std::size_t i = 0; i < csi.n_antennas; ++i) {
        for (std::size_t k = 0; k < csi.n_samples; ++k) {
            double acc = 0.0;
            for (std::size_t j = 0; j < csi.n_subcarriers; ++j) acc += std::norm(csi.at(i, j, k));
            const double lin = cfg.power_scale * acc / static_cast<double>(csi.n_subcarriers);
            double db = lin > 0.0 ? 10.0 * std::log10(lin) : cfg.rssi_clamp_min_db;
            db = std::clamp(db, cfg.rssi_clamp_min_db, cfg.rssi_clamp_max_db);
            out.at(i, k) = std::floor(db / step + 0.5) * step;  // round half up
        }
    }
    return out;
}

DynamicPathTruth dynamic_path_truth(const Trajectory& traj, const BistaticGeometry& geo) {
    DynamicPathTruth t;
    const std::size_t m = traj.points.size();
    t.tau_tx_s.resize(m);
    t.tau_rx_s.resize(m);
    t.bistatic_m.resize(m);
    t.sin_aoa.resize(m);
    t.zeta.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        const Point2 p{traj.points[k].x_m, traj.points[k].y_m};
        const double d1 = distance(p, geo.tx_local());
        const double d2 = norm(p);
        t.tau_tx_s[k] = d1 / kSpeedOfLight;
        t.tau_rx_s[k] = d2 / kSpeedOfLight;
        t.bistatic_m[k] = d1 + d2;
        t.sin_aoa[k] = d2 > 0.0 ? p.x / d2 : 0.0;
        t.zeta[k] = kSpeedOfLight / d1 + kSpeedOfLight / d2;
    }
    return t;
}

ZetaBoundReport zeta_bound_check(const Trajectory& traj, const BistaticGeometry& geo, double d_min_m) {
    if (traj.points.size() < 2) throw DataError("zeta_bound_check: need at least two samples");
    if (!(d_min_m > 0.0)) throw ConfigError("zeta_bound_check: d_min must be positive");
    const auto t = dynamic_path_truth(traj, geo);
    for (std::size_t k = 0; k < t.tau_tx_s.size(); ++k) {
        if (t.tau_tx_s[k] * kSpeedOfLight < d_min_m || t.tau_rx_s[k] * kSpeedOfLight < d_min_m)
            throw ConfigError("zeta_bound_check: trajectory violates d_min");
    }
    ZetaBoundReport rep;
    rep.tau_min_s = d_min_m / kSpeedOfLight;
    const double inv_tau_min2 = 1.0 / (rep.tau_min_s * rep.tau_min_s);
    for (std::size_t k = 1; k < t.zeta.size(); ++k) {
        const double step = std::abs(t.zeta[k] - t.zeta[k - 1]);
        const double bnd =
            (std::abs(t.tau_tx_s[k] - t.tau_tx_s[k - 1]) + std::abs(t.tau_rx_s[k] - t.tau_rx_s[k - 1])) * inv_tau_min2;
        rep.max_step = std::max(rep.max_step, step);
        rep.bound = std::max(rep.bound, bnd);
        if (step > bnd * (1.0 + 1e-12))
            throw BoundViolation("zeta_bound_check: empirical step change exceeds the analytic bound");
    }
    rep.holds = true;
    return rep;
}

}  // namespace wirssi
