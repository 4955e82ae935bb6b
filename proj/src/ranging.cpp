#include "wirssi/ranging.hpp"

#include <cmath>

#include "wirssi/dsp.hpp"
#include "wirssi/errors.hpp"

namespace wirssi {

double delay_from_amplitude(const Detection& det, const ReflectionRatio& gamma,
                            const BistaticGeometry& geo) {
    if (!(gamma.gamma > 0.0)) throw ConfigError("delay_from_amplitude: gamma must be positive");
    if (det.peak_magnitude <= kMagnitudeFloor)
        throw BelowMagnitudeFloor("delay_from_amplitude: peak magnitude at or below the floor");
    const double tau = gamma.gamma * geo.baseline_delay_s() / det.peak_magnitude;
    if (tau * kSpeedOfLight <= geo.baseline_m())
        throw RangeNotBistatic("delay_from_amplitude: implied range does not exceed the baseline");
    return tau;
}

namespace {

std::vector<double> per_sample_gamma(std::span<const CalibrationSample> samples,
                                     const BistaticGeometry& geo) {
    if (samples.empty()) throw EmptyCalibration("calibrate_gamma: no samples");
    std::vector<double> g;
    g.reserve(samples.size());
    const double tau_s = geo.baseline_delay_s();
    for (const auto& s : samples) {
        if (!(s.peak_magnitude > 0.0)) throw ConfigError("calibrate_gamma: nonpositive peak magnitude");
        const PolarDetection truth = cartesian_to_polar(s.true_position, geo);
        g.push_back(s.peak_magnitude * truth.bistatic_delay_s / tau_s);
    }
    return g;
}

}  // namespace

ReflectionRatio calibrate_gamma(std::span<const CalibrationSample> samples, const BistaticGeometry& geo) {
    const auto g = per_sample_gamma(samples, geo);
    ReflectionRatio r;
    r.sample_count = g.size();
    r.gamma = dsp::mean(g);
    r.dispersion = dsp::stddev(g);
    return r;
}

double calibration_median(std::span<const CalibrationSample> samples, const BistaticGeometry& geo) {
    const auto g = per_sample_gamma(samples, geo);
    return dsp::median(g);
}

std::vector<ScaledRangePoint> relative_range_track(std::span<const Detection> detections,
                                                   const BistaticGeometry& geo) {
    std::vector<ScaledRangePoint> out;
    out.reserve(detections.size());
    const double tau_s = geo.baseline_delay_s();
    for (const auto& d : detections) {
        ScaledRangePoint p;
        p.t_s = d.cpi_timestamp_s;
        if (d.peak_magnitude > kMagnitudeFloor) {
            p.scaled_delay = tau_s / d.peak_magnitude;
            p.valid = true;
        }
        out.push_back(p);
    }
    return out;
}

}  // namespace wirssi
