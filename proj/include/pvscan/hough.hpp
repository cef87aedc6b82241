#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pvscan/edge.hpp"
#include "pvscan/geometry.hpp"

namespace pvscan {

/// Infinite line in rho-theta normal form: a point (x, y) lies on the line
/// iff x*cos(theta) + y*sin(theta) == rho. theta is kept in [0, pi).
struct LineRT {
    double rho = 0.0;
    double theta = 0.0;
    std::uint32_t votes = 0;
};

/// Vote grid over (theta, rho). rho bins cover [-D, +D] for D = image
/// diagonal; bin centers sit at integer multiples of the steps.
struct HoughAccumulator {
    double rho_step = 1.0;
    double theta_step = 0.0;
    int rho_bins = 0;
    int theta_bins = 0;
    int rho_half = 0;  // index of the rho == 0 bin
    std::vector<std::uint32_t> votes;  // theta-major: votes[t * rho_bins + r]

    double rho_at(int r) const { return (r - rho_half) * rho_step; }
    double theta_at(int t) const { return t * theta_step; }
    std::uint32_t at(int t, int r) const {
        return votes[static_cast<std::size_t>(t) * rho_bins + r];
    }
    std::uint64_t total_votes() const;
};

HoughAccumulator build_accumulator(const EdgeMap& edges, double rho_step, double theta_step);

/// Accumulate, then report local maxima with votes >= vote_threshold. A cell
/// is a peak when it beats all 8 neighbours, ties resolved toward the
/// smaller (theta index, rho index). Output is sorted by descending votes.
/// An empty edge map yields an empty list.
std::vector<LineRT> hough_lines(const EdgeMap& edges, double rho_step, double theta_step,
                                int vote_threshold);

/// min(|t1 - t2|, pi - |t1 - t2|).
double angular_distance(double theta1, double theta2);

/// Collapses similar proposals (theta within theta_tol and rho within
/// rho_tol after wraparound alignment) into their vote-weighted mean.
/// Single-linkage passes repeat until no two outputs are similar, so the
/// operation is idempotent. Output is sorted by descending votes.
std::vector<LineRT> group_lines(const std::vector<LineRT>& lines, double theta_tol,
                                double rho_tol);

std::optional<Point2d> line_intersection(const LineRT& a, const LineRT& b);

/// Two ordered line families, their in-image intersection keypoints and the
/// panel quadrilaterals bounded by consecutive line pairs.
struct GridModel {
    std::vector<LineRT> family_a;  // near-vertical, sorted left to right
    std::vector<LineRT> family_b;  // near-horizontal, sorted top to bottom
    std::vector<Point2d> corners;
    std::vector<PanelQuad> panels;
};

GridModel fit_grid(const std::vector<LineRT>& lines, double split_angle, int img_width,
                   int img_height);

/// Largest panel fully inside the image; ties and the nothing-inside case
/// fall back to the panel whose centroid is nearest the image center.
std::size_t select_prominent_panel_index(const GridModel& grid, const GrayImage& img);
PanelQuad select_prominent_panel(const GridModel& grid, const GrayImage& img);

}  // namespace pvscan
