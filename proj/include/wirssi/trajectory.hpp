#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wirssi/types.hpp"

namespace wirssi {

struct TrajectoryPoint {
    double t_s = 0.0;
    double x_m = 0.0;
    double y_m = 0.0;
};

/// Time series of Cartesian positions in the receiver-local frame.
struct Trajectory {
    enum class Kind { raw, smoothed, ground_truth };
    std::vector<TrajectoryPoint> points;
    Kind kind = Kind::raw;
};

/// Arc-length parameterized planar curve traversed at constant speed.
/// Closed curves loop; open curves are walked back and forth.
class PathCurve {
public:
    static PathCurve ellipse(Point2 center, double semi_x_m, double semi_y_m);
    static PathCurve line(Point2 start, Point2 end);
    /// Axis-aligned rectangle loop starting at the given corner, counter-clockwise.
    static PathCurve rectangle(Point2 corner, double width_m, double height_m);
    static PathCurve waypoints(std::vector<Point2> pts, bool closed);

    /// Position after walking arc length s from the start.
    Point2 position_at_arclength(double s) const;

    /// Position at time t for the given speed.
    Point2 position_at_time(double t_s, double speed_mps) const;

    double perimeter() const { return cumlen_.back(); }
    bool closed() const { return closed_; }

    /// Minimum distance from the curve to a point (evaluated on the
    /// internal sampling; used for sensing-region validation).
    double min_distance_to(const Point2& p) const;

private:
    PathCurve(std::vector<Point2> samples, bool closed);
    std::vector<Point2> samples_;
    std::vector<double> cumlen_;
    bool closed_ = false;
};

}  // namespace wirssi
