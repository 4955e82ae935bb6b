#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wirssi/errors.hpp"
#include "wirssi/pipeline.hpp"

using namespace wirssi;

namespace {

SimulatedCapture short_capture(const std::string& preset_name, double duration,
                               std::uint64_t seed = 1) {
    const auto geo = default_geometry();
    const auto preset = make_preset(preset_name, geo);
    return simulate_preset(preset, geo, duration, seed);
}

}  // namespace

TEST_CASE("default geometry matches the documented deployment") {
    const auto geo = default_geometry();
    CHECK(geo.baseline_m() == doctest::Approx(2.3).epsilon(1e-12));
    CHECK(geo.sin_theta_s() == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(geo.num_antennas() == 3);
    CHECK_FALSE(geo.blind_configuration());
}

TEST_CASE("presets keep clear of both terminals and stay in the kept sector") {
    const auto geo = default_geometry();
    for (const auto* name : {"ellipse", "line", "rectangle", "pushpull"}) {
        const auto preset = make_preset(name, geo);
        CHECK(preset.curve.min_distance_to(geo.tx_local()) >= 1.0);
        CHECK(preset.curve.min_distance_to({0.0, 0.0}) >= 1.0);
        for (double s = 0.0; s < preset.curve.perimeter(); s += 0.05) {
            const auto p = preset.curve.position_at_arclength(s);
            REQUIRE(p.x / norm(p) >= geo.sin_theta_s());
        }
    }
    CHECK_THROWS_AS(make_preset("spiral", geo), ConfigError);
}

TEST_CASE("preset capture plants the requested reflection ratio") {
    const auto cap = short_capture("ellipse", 6.0);
    CHECK(cap.true_gamma == doctest::Approx(0.3).epsilon(0.05));
    CHECK(cap.ground_truth.points.size() == cap.timestamps.size());
    CHECK(cap.rssi_db.rows == 3);
    // quantized onto the 1 dB grid
    for (double v : cap.rssi_db.data) REQUIRE(v == std::round(v));
}

TEST_CASE("tracking a short preset run produces a sane trajectory") {
    const auto geo = default_geometry();
    const auto cap = short_capture("line", 20.0);
    const auto trace = trace_of(cap, 1000.0);

    TrackingParams params;
    const auto cal = run_calibration(trace, cap.ground_truth, geo, params);
    CHECK(cal.cpis_used > 20);
    CHECK(cal.ratio.gamma == doctest::Approx(cap.true_gamma).epsilon(0.3));

    const auto res = run_tracking(trace, geo, cal.ratio, params);
    CHECK(res.cpis_total > 500);
    CHECK(res.raw.points.size() > 400);
    CHECK(res.smoothed.points.size() == res.raw.points.size());
    const auto rep = score(res.smoothed, cap.ground_truth);
    CHECK(rep.median_xy < 0.8);
    CHECK(res.timings.cpis == res.cpis_total);
    CHECK(res.timings.total.mean_ms < 32.0);
}

TEST_CASE("tracking tolerates a half-missing antenna column") {
    const auto geo = default_geometry();
    const auto cap = short_capture("line", 8.0);
    auto trace = trace_of(cap, 1000.0);
    // drop every other sample of antenna 2
    for (std::size_t k = 0; k < trace.samples_db.cols; k += 2)
        trace.samples_db.at(1, k) = std::numeric_limits<double>::quiet_NaN();

    TrackingParams params;
    ReflectionRatio gamma{0.3, 1, 0.0};
    const auto res = run_tracking(trace, geo, gamma, params);
    CHECK(res.gaps.held_samples > 3000);
    CHECK(res.cpis_total > 200);
    CHECK(res.raw.points.size() > 0);
}

TEST_CASE("calibration requires temporal overlap and enough detections") {
    const auto geo = default_geometry();
    const auto cap = short_capture("line", 6.0);
    const auto trace = trace_of(cap, 1000.0);
    TrackingParams params;

    Trajectory late_truth = cap.ground_truth;
    for (auto& p : late_truth.points) p.t_s += 1000.0;
    CHECK_THROWS_AS(run_calibration(trace, late_truth, geo, params), NoTemporalOverlap);

    Trajectory tiny_truth;  // covers only the first three CPI centers
    tiny_truth.points.push_back({0.0, 2.5, 2.5});
    tiny_truth.points.push_back({0.13, 2.5, 2.5});
    CHECK_THROWS_AS(run_calibration(trace, tiny_truth, geo, params), InsufficientDetections);
}

TEST_CASE("feature run emits a map aligned with processed CPIs") {
    const auto geo = default_geometry();
    const auto cap = short_capture("pushpull", 10.0);
    const auto trace = trace_of(cap, 1000.0);
    FeatureParams params;
    const auto map = run_features(trace, geo, params);
    CHECK(map.values.rows == (trace.samples_db.cols - 128) / 32 + 1);
    CHECK(map.values.cols == 128);
    for (double v : map.values.data) REQUIRE(v >= 0.0);
    // mirror-side energy is zeroed when rejection is on, present otherwise
    FeatureParams raw_params;
    raw_params.reject_mirror = false;
    const auto raw_map = run_features(trace, geo, raw_params);
    double rejected_energy = 0.0, raw_energy = 0.0;
    for (std::size_t t = 0; t < map.values.rows; ++t) {
        rejected_energy += map.values.at(t, 10);
        raw_energy += raw_map.values.at(t, 10);
    }
    CHECK(raw_energy >= rejected_energy);
}

TEST_CASE("simulation is deterministic for a fixed seed") {
    const auto a = short_capture("ellipse", 3.0, 7);
    const auto b = short_capture("ellipse", 3.0, 7);
    CHECK(a.rssi_db.data == b.rssi_db.data);
    CHECK(a.true_gamma == b.true_gamma);
    const auto c = short_capture("ellipse", 3.0, 8);
    CHECK(a.rssi_db.data != c.rssi_db.data);
}
