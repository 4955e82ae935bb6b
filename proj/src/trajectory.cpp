#include "wirssi/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wirssi/errors.hpp"

namespace wirssi {

namespace {
constexpr std::size_t kEllipseSamples = 16384;
}

PathCurve::PathCurve(std::vector<Point2> samples, bool closed)
    : samples_(std::move(samples)), closed_(closed) {
    if (samples_.size() < 2) throw ConfigError("path curve needs at least two points");
    cumlen_.resize(samples_.size());
    cumlen_[0] = 0.0;
    for (std::size_t i = 1; i < samples_.size(); ++i)
        cumlen_[i] = cumlen_[i - 1] + distance(samples_[i - 1], samples_[i]);
    if (!(cumlen_.back() > 0.0)) throw ConfigError("path curve has zero length");
}

PathCurve PathCurve::ellipse(Point2 center, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw ConfigError("ellipse semi-axes must be positive");
    std::vector<Point2> pts(kEllipseSamples + 1);
    for (std::size_t i = 0; i <= kEllipseSamples; ++i) {
        const double u = 2.0 * std::numbers::pi * static_cast<double>(i) / kEllipseSamples;
        pts[i] = {center.x + a * std::cos(u), center.y + b * std::sin(u)};
    }
    return PathCurve(std::move(pts), true);
}

PathCurve PathCurve::line(Point2 start, Point2 end) {
    return PathCurve({start, end}, false);
}

PathCurve PathCurve::rectangle(Point2 c, double w, double h) {
    if (!(w > 0.0) || !(h > 0.0)) throw ConfigError("rectangle dimensions must be positive");
    return PathCurve({c, {c.x + w, c.y}, {c.x + w, c.y + h}, {c.x, c.y + h}, c}, true);
}

PathCurve PathCurve::waypoints(std::vector<Point2> pts, bool closed) {
    if (closed && pts.size() >= 2) {
        if (distance(pts.front(), pts.back()) > 0.0) pts.push_back(pts.front());
    }
    return PathCurve(std::move(pts), closed);
}

Point2 PathCurve::position_at_arclength(double s) const {
    s = std::clamp(s, 0.0, cumlen_.back());
    const auto it = std::upper_bound(cumlen_.begin(), cumlen_.end(), s);
    std::size_t i = (it == cumlen_.begin()) ? 1 : static_cast<std::size_t>(it - cumlen_.begin());
    if (i >= cumlen_.size()) i = cumlen_.size() - 1;
    const double seg = cumlen_[i] - cumlen_[i - 1];
    const double f = seg > 0.0 ? (s - cumlen_[i - 1]) / seg : 0.0;
    const Point2& p0 = samples_[i - 1];
    const Point2& p1 = samples_[i];
    return {p0.x + f * (p1.x - p0.x), p0.y + f * (p1.y - p0.y)};
}

Point2 PathCurve::position_at_time(double t_s, double speed_mps) const {
    const double P = perimeter();
    if (!(speed_mps > 0.0)) return samples_.front();
    double s = speed_mps * t_s;
    if (closed_) {
        s = std::fmod(s, P);
        if (s < 0.0) s += P;
    } else {
        // ping-pong traversal
        s = std::fmod(s, 2.0 * P);
        if (s < 0.0) s += 2.0 * P;
        if (s > P) s = 2.0 * P - s;
    }
    return position_at_arclength(s);
}

double PathCurve::min_distance_to(const Point2& p) const {
    double best = distance(samples_.front(), p);
    for (std::size_t i = 1; i < samples_.size(); ++i) {
        // exact point-to-segment distance per sampled segment
        const Point2& a = samples_[i - 1];
        const Point2& b = samples_[i];
        const Point2 ab = b - a;
        const double len2 = dot(ab, ab);
        double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        const Point2 proj{a.x + t * ab.x, a.y + t * ab.y};
        best = std::min(best, distance(proj, p));
    }
    return best;
}

}  // namespace wirssi
