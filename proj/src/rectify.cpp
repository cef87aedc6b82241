#include "pvscan/rectify.hpp"

#include <algorithm>
#include <cmath>

namespace pvscan {

Point2d Homography::apply(const Point2d& p) const {
    const double xs = m[0][0] * p.x + m[0][1] * p.y + m[0][2];
    const double ys = m[1][0] * p.x + m[1][1] * p.y + m[1][2];
    const double ws = m[2][0] * p.x + m[2][1] * p.y + m[2][2];
    return {xs / ws, ys / ws};
}

double Homography::determinant() const {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Homography Homography::inverse() const {
    const double det = determinant();
    if (std::abs(det) < 1e-15) throw DegenerateQuad("homography is singular");
    Homography inv;
    // Adjugate over determinant, then renormalize to m[2][2] == 1.
    inv.m[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
    inv.m[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
    inv.m[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
    inv.m[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
    inv.m[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
    inv.m[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
    inv.m[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
    inv.m[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
    inv.m[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
    const double w = inv.m[2][2];
    if (std::abs(w) < 1e-15) throw DegenerateQuad("homography inverse cannot be normalized");
    for (auto& row : inv.m) {
        for (double& v : row) v /= w;
    }
    return inv;
}

PanelQuad normalize_quad(const PanelQuad& quad) {
    const Point2d c = quad_centroid(quad);
    std::array<Point2d, 4> pts = quad.corners;
    // Ascending atan2 with y pointing down walks the corners clockwise on
    // screen.
    std::sort(pts.begin(), pts.end(), [&](const Point2d& a, const Point2d& b) {
        return std::atan2(a.y - c.y, a.x - c.x) < std::atan2(b.y - c.y, b.x - c.x);
    });
    std::size_t tl = 0;
    for (std::size_t i = 1; i < 4; ++i) {
        const double si = pts[i].x + pts[i].y;
        const double st = pts[tl].x + pts[tl].y;
        if (si < st || (si == st && pts[i].y < pts[tl].y)) tl = i;
    }
    PanelQuad out;
    for (std::size_t i = 0; i < 4; ++i) out.corners[i] = pts[(tl + i) % 4];
    return out;
}

namespace {

// Partial-pivot Gaussian elimination on an n x n system, in place.
// Returns false when a pivot is (numerically) zero.
bool solve_linear(std::vector<std::vector<double>>& a, std::vector<double>& b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row) {
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        }
        if (std::abs(a[pivot][col]) < 1e-12) return false;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t row = col + 1; row < n; ++row) {
            const double f = a[row][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t k = col; k < n; ++k) a[row][k] -= f * a[col][k];
            b[row] -= f * b[col];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * b[k];
        b[i] = s / a[i][i];
    }
    return true;
}

}  // namespace

Homography homography_from_points(const std::array<Point2d, 4>& src,
                                  const std::array<Point2d, 4>& dst) {
    // Two rows per correspondence with h22 fixed to 1:
    //   x*h00 + y*h01 + h02 - u*x*h20 - u*y*h21 = u
    //   x*h10 + y*h11 + h12 - v*x*h20 - v*y*h21 = v
    std::vector<std::vector<double>> a(8, std::vector<double>(8, 0.0));
    std::vector<double> b(8, 0.0);
    for (int i = 0; i < 4; ++i) {
        const double x = src[i].x, y = src[i].y;
        const double u = dst[i].x, v = dst[i].y;
        a[2 * i] = {x, y, 1.0, 0.0, 0.0, 0.0, -u * x, -u * y};
        b[2 * i] = u;
        a[2 * i + 1] = {0.0, 0.0, 0.0, x, y, 1.0, -v * x, -v * y};
        b[2 * i + 1] = v;
    }
    if (!solve_linear(a, b)) {
        throw DegenerateQuad("homography system is singular (collinear corners?)");
    }
    Homography h;
    h.m = {{{b[0], b[1], b[2]}, {b[3], b[4], b[5]}, {b[6], b[7], 1.0}}};
    if (std::abs(h.determinant()) < 1e-12) {
        throw DegenerateQuad("homography is rank-deficient");
    }
    for (int i = 0; i < 4; ++i) {
        const Point2d mapped = h.apply(src[i]);
        if (std::hypot(mapped.x - dst[i].x, mapped.y - dst[i].y) >= 1e-9) {
            throw DegenerateQuad("homography corner residual exceeds tolerance");
        }
    }
    return h;
}

Homography homography_from_quad(const PanelQuad& quad, int rect_w, int rect_h) {
    if (rect_w < 2 || rect_h < 2) throw InvalidArgument("rectified size must be >= 2");
    if (quad_area(quad) <= 0.0 || !quad_is_simple(quad)) {
        throw DegenerateQuad("panel quad is degenerate");
    }
    const PanelQuad q = normalize_quad(quad);
    const std::array<Point2d, 4> dst = {{{0.0, 0.0},
                                         {static_cast<double>(rect_w - 1), 0.0},
                                         {static_cast<double>(rect_w - 1),
                                          static_cast<double>(rect_h - 1)},
                                         {0.0, static_cast<double>(rect_h - 1)}}};
    return homography_from_points(q.corners, dst);
}

RectifiedPanel warp_panel(const GrayImage& img, const PanelQuad& quad, int rect_w, int rect_h,
                          const TempCalibration& calib) {
    const Homography h = homography_from_quad(quad, rect_w, rect_h);
    const Homography inv = h.inverse();

    RectifiedPanel panel;
    panel.image = GrayImage::filled(rect_w, rect_h, img.bit_depth, 0);
    panel.calib = calib;
    panel.source = normalize_quad(quad);

    constexpr double kSnap = 1e-9;  // integer-site snapping for exact crops
    const double pmax = img.max_value();
    for (int r = 0; r < rect_h; ++r) {
        for (int c = 0; c < rect_w; ++c) {
            const Point2d s = inv.apply({static_cast<double>(c), static_cast<double>(r)});
            double fx = s.x - std::floor(s.x);
            double fy = s.y - std::floor(s.y);
            int x0 = static_cast<int>(std::floor(s.x));
            int y0 = static_cast<int>(std::floor(s.y));
            if (fx < kSnap) fx = 0.0;
            if (fx > 1.0 - kSnap) { fx = 0.0; ++x0; }
            if (fy < kSnap) fy = 0.0;
            if (fy > 1.0 - kSnap) { fy = 0.0; ++y0; }
            const int x1 = fx == 0.0 ? x0 : x0 + 1;
            const int y1 = fy == 0.0 ? y0 : y0 + 1;

            const auto usable = [&](int x, int y) {
                return img.in_bounds(x, y) && img.valid_at(x, y);
            };
            if (!usable(x0, y0) || !usable(x1, y0) || !usable(x0, y1) || !usable(x1, y1)) {
                panel.image.set_valid(c, r, false);
                continue;
            }
            const double v00 = img.at(x0, y0);
            const double v10 = img.at(x1, y0);
            const double v01 = img.at(x0, y1);
            const double v11 = img.at(x1, y1);
            const double value = (1.0 - fx) * (1.0 - fy) * v00 + fx * (1.0 - fy) * v10 +
                                 (1.0 - fx) * fy * v01 + fx * fy * v11;
            panel.image.set(c, r,
                            static_cast<std::uint16_t>(
                                std::llround(std::clamp(value, 0.0, pmax))));
        }
    }
    return panel;
}

}  // namespace pvscan
