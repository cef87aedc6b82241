#include "pvscan/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace pvscan {

ImageTruth truth_from_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("label file is not valid JSON: ") + e.what());
    }
    ImageTruth truth;
    try {
        truth.image = j.at("image").get<std::string>();
        for (const auto& s : j.value("lines", nlohmann::json::array())) {
            truth.lines.push_back({s.at("x1").get<double>(), s.at("y1").get<double>(),
                                   s.at("x2").get<double>(), s.at("y2").get<double>()});
        }
        for (const auto& k : j.value("keypoints", nlohmann::json::array())) {
            truth.keypoints.push_back({k.at("x").get<double>(), k.at("y").get<double>()});
        }
        for (const auto& p : j.value("panels", nlohmann::json::array())) {
            if (p.size() != 4) throw ParseError("panel polygon must have 4 points");
            PanelQuad q;
            for (std::size_t i = 0; i < 4; ++i) {
                q.corners[i] = {p[i][0].get<double>(), p[i][1].get<double>()};
            }
            truth.panels.push_back(q);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("label fields missing or mistyped: ") + e.what());
    }
    for (const Segment& s : truth.lines) {
        if (s.x1 == s.x2 && s.y1 == s.y2) throw ParseError("segment endpoints must differ");
    }
    return truth;
}

std::string truth_to_text(const ImageTruth& truth, const std::string& generator) {
    nlohmann::json j;
    j["image"] = truth.image;
    if (!generator.empty()) j["generator"] = generator;
    j["lines"] = nlohmann::json::array();
    for (const Segment& s : truth.lines) {
        j["lines"].push_back({{"x1", s.x1}, {"y1", s.y1}, {"x2", s.x2}, {"y2", s.y2}});
    }
    j["keypoints"] = nlohmann::json::array();
    for (const Point2d& k : truth.keypoints) {
        j["keypoints"].push_back({{"x", k.x}, {"y", k.y}});
    }
    j["panels"] = nlohmann::json::array();
    for (const PanelQuad& p : truth.panels) {
        nlohmann::json poly = nlohmann::json::array();
        for (const Point2d& c : p.corners) poly.push_back({c.x, c.y});
        j["panels"].push_back(poly);
    }
    return j.dump(2) + "\n";
}

long MatchOutcome::tp() const {
    return std::count(truth_class.begin(), truth_class.end(), TruthClass::TP);
}
long MatchOutcome::err() const {
    return std::count(truth_class.begin(), truth_class.end(), TruthClass::Err);
}
long MatchOutcome::fn() const {
    return std::count(truth_class.begin(), truth_class.end(), TruthClass::FN);
}
long MatchOutcome::fp() const {
    return std::count(pred_status.begin(), pred_status.end(), PredStatus::FalsePositive);
}
long MatchOutcome::matched() const {
    return std::count(pred_status.begin(), pred_status.end(), PredStatus::Matched);
}
long MatchOutcome::absorbed() const {
    return std::count(pred_status.begin(), pred_status.end(), PredStatus::Absorbed);
}

double segment_line_error(const LineRT& line, const Segment& seg) {
    const double c = std::cos(line.theta), s = std::sin(line.theta);
    const double e1 = std::abs(seg.x1 * c + seg.y1 * s - line.rho);
    const double e2 = std::abs(seg.x2 * c + seg.y2 * s - line.rho);
    return std::max(e1, e2);
}

namespace {

// Normal-form angle of the segment's carrier line, in [0, pi).
double segment_normal_theta(const Segment& seg) {
    double theta = std::atan2(seg.x1 - seg.x2, seg.y2 - seg.y1);
    if (theta < 0.0) theta += M_PI;
    if (theta >= M_PI) theta -= M_PI;
    return theta;
}

}  // namespace

MatchOutcome match_lines(const std::vector<LineRT>& preds, const std::vector<Segment>& truth,
                         double eps_tp, double eps_err, double theta_tol) {
    if (!(eps_tp > 0.0) || !(eps_tp < eps_err) || !(theta_tol > 0.0)) {
        throw BadTolerances("need 0 < eps_tp < eps_err and theta_tol > 0");
    }

    std::vector<double> truth_theta(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) truth_theta[i] = segment_normal_theta(truth[i]);

    constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
    MatchOutcome out;
    out.truth_class.assign(truth.size(), TruthClass::FN);
    out.best_error_px.assign(truth.size(), kNan);
    out.pred_status.assign(preds.size(), PredStatus::FalsePositive);

    // Each prediction is assigned to the truth line it fits best; ties go to
    // the lower truth index.
    std::vector<int> assignment(preds.size(), -1);
    std::vector<double> assignment_error(preds.size(), kNan);
    for (std::size_t p = 0; p < preds.size(); ++p) {
        int best = -1;
        double best_e = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < truth.size(); ++t) {
            if (angular_distance(preds[p].theta, truth_theta[t]) > theta_tol) continue;
            const double e = segment_line_error(preds[p], truth[t]);
            if (e > eps_err) continue;
            if (e < best_e) {
                best_e = e;
                best = static_cast<int>(t);
            }
        }
        assignment[p] = best;
        if (best >= 0) assignment_error[p] = best_e;
    }

    for (std::size_t t = 0; t < truth.size(); ++t) {
        int best_pred = -1;
        double best_e = std::numeric_limits<double>::infinity();
        for (std::size_t p = 0; p < preds.size(); ++p) {
            if (assignment[p] != static_cast<int>(t)) continue;
            if (assignment_error[p] < best_e) {
                best_e = assignment_error[p];
                best_pred = static_cast<int>(p);
            }
        }
        if (best_pred < 0) continue;
        out.best_error_px[t] = best_e;
        out.truth_class[t] = best_e <= eps_tp ? TruthClass::TP : TruthClass::Err;
        for (std::size_t p = 0; p < preds.size(); ++p) {
            if (assignment[p] == static_cast<int>(t)) {
                out.pred_status[p] = static_cast<int>(p) == best_pred ? PredStatus::Matched
                                                                      : PredStatus::Absorbed;
            }
        }
    }
    return out;
}

MetricsReport compute_metrics(long tp, long err, long fp, long fn, long total_truth) {
    if (tp < 0 || err < 0 || fp < 0 || fn < 0 || total_truth < 0) {
        throw InconsistentCounts("negative count");
    }
    if (tp + err + fn != total_truth) {
        throw InconsistentCounts("tp + err + fn must equal total_truth");
    }
    MetricsReport r;
    r.tp = tp;
    r.err = err;
    r.fp = fp;
    r.fn = fn;
    r.total_truth = total_truth;
    const double total = static_cast<double>(total_truth);
    r.recall = total_truth > 0 ? tp / total : 0.0;
    r.miss_rate = total_truth > 0 ? fn / total : 0.0;
    r.error_rate = (tp + err) > 0 ? static_cast<double>(err) / (tp + err) : 0.0;
    if (tp + fp > 0) r.precision = static_cast<double>(tp) / (tp + fp);
    if (tp > 0) r.error_rate_alt = static_cast<double>(err) / tp;
    return r;
}

std::string format_percent(double ratio) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g%%", ratio * 100.0);
    return buf;
}

std::string render_metrics_table(const MetricsReport& r) {
    std::ostringstream os;
    char line[160];
    os << "Detection Result   Count  Equation       Metric\n";
    std::snprintf(line, sizeof(line), "True Positive   %8ld  TP/%-8ld  %8s  Recall\n", r.tp,
                  r.total_truth, format_percent(r.recall).c_str());
    os << line;
    std::snprintf(line, sizeof(line), "Exceeds Error   %8ld  Err/(TP+Err) %8s  Error Rate\n",
                  r.err, format_percent(r.error_rate).c_str());
    os << line;
    std::snprintf(line, sizeof(line), "False Positive  %8ld  TP/(TP+FP)   %8s  Precision\n",
                  r.fp, r.precision ? format_percent(*r.precision).c_str() : "n/a");
    os << line;
    std::snprintf(line, sizeof(line), "False Negative  %8ld  FN/%-8ld  %8s  Miss Rate\n", r.fn,
                  r.total_truth, format_percent(r.miss_rate).c_str());
    os << line;
    std::snprintf(line, sizeof(line), "(error_rate_alt = Err/TP: %s)\n",
                  r.error_rate_alt ? format_percent(*r.error_rate_alt).c_str() : "n/a");
    os << line;
    return os.str();
}

std::string render_metrics_csv(const MetricsReport& r) {
    std::ostringstream os;
    os << "tp,err,fp,fn,total,recall,error_rate,precision,miss_rate\n";
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%ld,%ld,%ld,%ld,%ld,%.6f,%.6f,", r.tp, r.err, r.fp, r.fn,
                  r.total_truth, r.recall, r.error_rate);
    os << buf;
    if (r.precision) {
        std::snprintf(buf, sizeof(buf), "%.6f", *r.precision);
        os << buf;
    }
    std::snprintf(buf, sizeof(buf), ",%.6f\n", r.miss_rate);
    os << buf;
    return os.str();
}

double keypoint_recall(const std::vector<Point2d>& preds, const std::vector<Point2d>& truth,
                       double radius_px) {
    if (truth.empty()) return 0.0;
    std::vector<bool> used(preds.size(), false);
    long matched = 0;
    for (const Point2d& t : truth) {
        int best = -1;
        double best_d = radius_px;
        for (std::size_t p = 0; p < preds.size(); ++p) {
            if (used[p]) continue;
            const double d = distance(t, preds[p]);
            if (d <= best_d) {
                best_d = d;
                best = static_cast<int>(p);
            }
        }
        if (best >= 0) {
            used[best] = true;
            ++matched;
        }
    }
    return static_cast<double>(matched) / static_cast<double>(truth.size());
}

namespace {

// Sutherland-Hodgman clip of a polygon against one directed edge.
std::vector<Point2d> clip_edge(const std::vector<Point2d>& poly, const Point2d& a,
                               const Point2d& b, double inside_sign) {
    std::vector<Point2d> out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2d& p = poly[i];
        const Point2d& q = poly[(i + 1) % n];
        const double side_p =
            inside_sign * ((b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x));
        const double side_q =
            inside_sign * ((b.x - a.x) * (q.y - a.y) - (b.y - a.y) * (q.x - a.x));
        const bool in_p = side_p >= 0.0;
        const bool in_q = side_q >= 0.0;
        if (in_p) out.push_back(p);
        if (in_p != in_q) {
            const double t = side_p / (side_p - side_q);
            out.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
        }
    }
    return out;
}

double polygon_area_signed(const std::vector<Point2d>& poly) {
    double s = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point2d& a = poly[i];
        const Point2d& b = poly[(i + 1) % poly.size()];
        s += a.x * b.y - b.x * a.y;
    }
    return 0.5 * s;
}

}  // namespace

double quad_iou(const PanelQuad& clip, const PanelQuad& subject) {
    const double area_clip = quad_area(clip);
    const double area_subj = quad_area(subject);
    if (area_clip <= 0.0 || area_subj <= 0.0) return 0.0;

    // Interior of the clip quad is on one consistent side of its edges;
    // pick the sign from its winding.
    std::vector<Point2d> clip_poly(clip.corners.begin(), clip.corners.end());
    const double inside_sign = polygon_area_signed(clip_poly) >= 0.0 ? 1.0 : -1.0;

    std::vector<Point2d> poly(subject.corners.begin(), subject.corners.end());
    for (int i = 0; i < 4 && !poly.empty(); ++i) {
        poly = clip_edge(poly, clip.corners[i], clip.corners[(i + 1) % 4], inside_sign);
    }
    if (poly.size() < 3) return 0.0;
    const double inter = std::abs(polygon_area_signed(poly));
    const double uni = area_clip + area_subj - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

double panel_recall(const std::vector<PanelQuad>& preds, const std::vector<PanelQuad>& truth,
                    double min_iou) {
    if (truth.empty()) return 0.0;
    std::vector<bool> used(preds.size(), false);
    long matched = 0;
    for (const PanelQuad& t : truth) {
        int best = -1;
        double best_iou = min_iou;
        for (std::size_t p = 0; p < preds.size(); ++p) {
            if (used[p]) continue;
            const double iou = quad_iou(preds[p], t);
            if (iou >= best_iou) {
                best_iou = iou;
                best = static_cast<int>(p);
            }
        }
        if (best >= 0) {
            used[best] = true;
            ++matched;
        }
    }
    return static_cast<double>(matched) / static_cast<double>(truth.size());
}

}  // namespace pvscan
