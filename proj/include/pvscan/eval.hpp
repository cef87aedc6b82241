#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pvscan/hough.hpp"

namespace pvscan {

struct Segment {
    double x1 = 0.0, y1 = 0.0;
    double x2 = 0.0, y2 = 0.0;
};

/// Hand-labeled ground truth for one image.
struct ImageTruth {
    std::string image;
    std::vector<Segment> lines;
    std::vector<Point2d> keypoints;
    std::vector<PanelQuad> panels;
};

ImageTruth truth_from_text(const std::string& text);
std::string truth_to_text(const ImageTruth& truth, const std::string& generator = "");

enum class TruthClass { TP, Err, FN };
enum class PredStatus { Matched, Absorbed, FalsePositive };

struct MatchOutcome {
    std::vector<TruthClass> truth_class;   // per ground-truth line
    std::vector<double> best_error_px;     // NaN for FN
    std::vector<PredStatus> pred_status;   // per prediction

    long tp() const;
    long err() const;
    long fn() const;
    long fp() const;
    long matched() const;
    long absorbed() const;
};

/// Max perpendicular distance from the segment endpoints to the line.
double segment_line_error(const LineRT& line, const Segment& seg);

/// Prediction-to-truth assignment with the multi-proposal collapse rule:
/// every prediction goes to the truth line it fits best (direction within
/// theta_tol, error within eps_err); the best prediction per truth counts as
/// matched, additional ones are absorbed rather than false positives. A
/// truth line is TP when its best error is within eps_tp, Err when matched
/// only within eps_err, FN otherwise.
MatchOutcome match_lines(const std::vector<LineRT>& preds, const std::vector<Segment>& truth,
                         double eps_tp, double eps_err, double theta_tol);

struct MetricsReport {
    long tp = 0, err = 0, fp = 0, fn = 0;
    long total_truth = 0;
    double recall = 0.0;
    double error_rate = 0.0;  // err / (tp + err)
    double miss_rate = 0.0;
    std::optional<double> precision;       // null when tp + fp == 0
    std::optional<double> error_rate_alt;  // err / tp, null when tp == 0
};

MetricsReport compute_metrics(long tp, long err, long fp, long fn, long total_truth);

/// Human-readable table with counts, formulas and metrics to 3 significant
/// figures.
std::string render_metrics_table(const MetricsReport& r);

/// CSV: header + one row of tp,err,fp,fn,total,recall,error_rate,precision,miss_rate.
std::string render_metrics_csv(const MetricsReport& r);

std::string format_percent(double ratio);

/// Fraction of truth keypoints with a distinct predicted corner within
/// radius_px (greedy one-to-one matching in truth order).
double keypoint_recall(const std::vector<Point2d>& preds, const std::vector<Point2d>& truth,
                       double radius_px);

/// Intersection-over-union of two quads (the second is clipped against the
/// first, which must be convex).
double quad_iou(const PanelQuad& clip, const PanelQuad& subject);

/// Fraction of truth panels matched one-to-one by a predicted panel with
/// IoU >= min_iou.
double panel_recall(const std::vector<PanelQuad>& preds, const std::vector<PanelQuad>& truth,
                    double min_iou);

}  // namespace pvscan
