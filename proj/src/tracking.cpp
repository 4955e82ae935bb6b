#include "wirssi/tracking.hpp"

#include <algorithm>
#include <cmath>

#include "wirssi/dsp.hpp"
#include "wirssi/errors.hpp"

namespace wirssi {

LocalizeResult localize(std::span<const Detection> detections, std::span<const double> delays_s,
                        const BistaticGeometry& geo, double max_range_m) {
    if (detections.size() != delays_s.size())
        throw DataError("localize: detection and delay lists must align");
    LocalizeResult res;
    res.trajectory.kind = Trajectory::Kind::raw;
    for (std::size_t i = 0; i < detections.size(); ++i) {
        PolarDetection pd;
        pd.bistatic_delay_s = delays_s[i];
        pd.bistatic_range_m = delays_s[i] * kSpeedOfLight;
        pd.aoa_rad = detections[i].aoa_rad;
        if (pd.bistatic_range_m > max_range_m) {
            ++res.dropped;
            continue;
        }
        try {
            const Point2 p = polar_to_cartesian(pd, geo);
            res.trajectory.points.push_back({detections[i].cpi_timestamp_s, p.x, p.y});
        } catch (const Error&) {
            ++res.dropped;
        }
    }
    return res;
}

Trajectory smooth_trajectory(const Trajectory& raw, const SmootherConfig& cfg) {
    Trajectory out;
    out.kind = Trajectory::Kind::smoothed;
    const std::size_t n = raw.points.size();
    if (n == 0) return out;
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = raw.points[i].x_m;
        ys[i] = raw.points[i].y_m;
    }
    xs = savitzky_golay(hampel_filter(xs, cfg).filtered, cfg);
    ys = savitzky_golay(hampel_filter(ys, cfg).filtered, cfg);
    out.points.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.points[i] = {raw.points[i].t_s, xs[i], ys[i]};
    return out;
}

ErrorReport score(const Trajectory& estimate, const Trajectory& truth) {
    if (truth.points.size() < 1 || estimate.points.empty())
        throw NoTemporalOverlap("score: empty trajectory");

    ErrorReport rep;
    const auto& tp = truth.points;
    for (const auto& e : estimate.points) {
        if (e.t_s < tp.front().t_s || e.t_s > tp.back().t_s) continue;
        // locate the truth segment containing e.t_s
        const auto it = std::lower_bound(tp.begin(), tp.end(), e.t_s,
                                         [](const TrajectoryPoint& p, double t) { return p.t_s < t; });
        double tx, ty;
        if (it == tp.begin()) {
            tx = it->x_m;
            ty = it->y_m;
        } else {
            const auto& b = *it;
            const auto& a = *(it - 1);
            const double span = b.t_s - a.t_s;
            const double f = span > 0.0 ? (e.t_s - a.t_s) / span : 0.0;
            tx = a.x_m + f * (b.x_m - a.x_m);
            ty = a.y_m + f * (b.y_m - a.y_m);
        }
        rep.err_x_m.push_back(std::abs(e.x_m - tx));
        rep.err_y_m.push_back(std::abs(e.y_m - ty));
        rep.err_xy_m.push_back(std::hypot(e.x_m - tx, e.y_m - ty));
    }
    if (rep.err_xy_m.empty()) throw NoTemporalOverlap("score: trajectories do not overlap in time");

    rep.median_x = dsp::median(rep.err_x_m);
    rep.median_y = dsp::median(rep.err_y_m);
    rep.median_xy = dsp::median(rep.err_xy_m);
    rep.p90_x = dsp::quantile(rep.err_x_m, 0.9);
    rep.p90_y = dsp::quantile(rep.err_y_m, 0.9);
    rep.p90_xy = dsp::quantile(rep.err_xy_m, 0.9);
    rep.cdf = rep.err_xy_m;
    std::sort(rep.cdf.begin(), rep.cdf.end());
    return rep;
}

}  // namespace wirssi
