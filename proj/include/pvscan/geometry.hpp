#pragma once

#include <array>
#include <cmath>

namespace pvscan {

struct Point2d {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Point2d& a, const Point2d& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

// Quadrilateral with corners ordered top-left, top-right, bottom-right,
// bottom-left in image orientation (y grows downward).
struct PanelQuad {
    std::array<Point2d, 4> corners{};
};

double quad_area(const PanelQuad& q);
Point2d quad_centroid(const PanelQuad& q);
bool quad_is_simple(const PanelQuad& q);

double point_segment_distance(const Point2d& p, const Point2d& a, const Point2d& b);
bool segments_intersect(const Point2d& a, const Point2d& b,
                        const Point2d& c, const Point2d& d);

}  // namespace pvscan
