#include "pvscan/geometry.hpp"

#include <algorithm>

namespace pvscan {

double quad_area(const PanelQuad& q) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
        const Point2d& a = q.corners[i];
        const Point2d& b = q.corners[(i + 1) % 4];
        s += a.x * b.y - b.x * a.y;
    }
    return std::abs(s) * 0.5;
}

Point2d quad_centroid(const PanelQuad& q) {
    Point2d c;
    for (const Point2d& p : q.corners) {
        c.x += p.x;
        c.y += p.y;
    }
    c.x *= 0.25;
    c.y *= 0.25;
    return c;
}

namespace {

double cross(const Point2d& o, const Point2d& a, const Point2d& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(const Point2d& a, const Point2d& b, const Point2d& p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

int orientation_sign(double v) {
    constexpr double kEps = 1e-12;
    if (v > kEps) return 1;
    if (v < -kEps) return -1;
    return 0;
}

}  // namespace

bool segments_intersect(const Point2d& a, const Point2d& b,
                        const Point2d& c, const Point2d& d) {
    const int d1 = orientation_sign(cross(a, b, c));
    const int d2 = orientation_sign(cross(a, b, d));
    const int d3 = orientation_sign(cross(c, d, a));
    const int d4 = orientation_sign(cross(c, d, b));
    if (d1 != d2 && d3 != d4) return true;
    if (d1 == 0 && on_segment(a, b, c)) return true;
    if (d2 == 0 && on_segment(a, b, d)) return true;
    if (d3 == 0 && on_segment(c, d, a)) return true;
    if (d4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

bool quad_is_simple(const PanelQuad& q) {
    // Opposite edges must not cross and the polygon must enclose area.
    const auto& c = q.corners;
    if (segments_intersect(c[0], c[1], c[2], c[3])) return false;
    if (segments_intersect(c[1], c[2], c[3], c[0])) return false;
    return quad_area(q) > 0.0;
}

double point_segment_distance(const Point2d& p, const Point2d& a, const Point2d& b) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    if (len2 <= 0.0) return distance(p, a);
    double t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

}  // namespace pvscan
