#pragma once

#include "pvscan/hough.hpp"
#include "pvscan/image.hpp"

namespace pvscan {

/// 3x3 projective transform, normalized so m[2][2] == 1. Points map through
/// (x', y', w') = m * (x, y, 1) followed by the perspective divide.
struct Homography {
    std::array<std::array<double, 3>, 3> m{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

    Point2d apply(const Point2d& p) const;
    Homography inverse() const;
    double determinant() const;
};

/// Reorders corners so the one with minimal x+y is top-left, then clockwise
/// in image orientation.
PanelQuad normalize_quad(const PanelQuad& quad);

/// Exact homography through four point correspondences, solved from the
/// standard 8x8 linear system by partial-pivot Gaussian elimination.
Homography homography_from_points(const std::array<Point2d, 4>& src,
                                  const std::array<Point2d, 4>& dst);

/// Maps the (normalized) quad corners onto the corners of a rect_w x rect_h
/// target. Corner-mapping residual is verified to stay below 1e-9 px.
Homography homography_from_quad(const PanelQuad& quad, int rect_w, int rect_h);

struct RectifiedPanel {
    GrayImage image;
    TempCalibration calib;
    PanelQuad source;
};

/// Inverse-mapped bilinear warp of the panel quad into a rect_w x rect_h
/// image. Target pixels whose source sample touches an invalid or
/// out-of-bounds pixel are invalid in the output; the calibration passes
/// through unchanged.
RectifiedPanel warp_panel(const GrayImage& img, const PanelQuad& quad, int rect_w, int rect_h,
                          const TempCalibration& calib);

}  // namespace pvscan
