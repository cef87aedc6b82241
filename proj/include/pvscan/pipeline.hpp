#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pvscan/eval.hpp"
#include "pvscan/hotspot.hpp"
#include "pvscan/hough.hpp"
#include "pvscan/image.hpp"
#include "pvscan/rectify.hpp"

namespace pvscan {

/// Every tunable of the detection pipeline with its default. Angles are
/// exposed in degrees; Canny thresholds are on the 8-bit scale and get
/// scaled by 257 for 16-bit inputs.
struct PipelineConfig {
    double stretch_lo_pct = 1.0;
    double stretch_hi_pct = 99.0;
    double blur_sigma = 1.4;
    double canny_low = 50.0;
    double canny_high = 150.0;
    double rho_step = 1.0;
    double theta_step_deg = 1.0;
    int vote_threshold = 60;
    double theta_tol_deg = 2.0;
    double rho_tol = 10.0;
    double split_angle_deg = 20.0;
    int rect_w = 120;
    int rect_h = 200;
    int cell_rows = 10;
    int cell_cols = 6;
    double hotspot_delta_c = 4.0;
    double min_valid_fraction = 0.5;
    double eps_tp = 5.0;
    double eps_err = 15.0;
    double eval_theta_tol_deg = 5.0;

    void validate() const;  // throws ConfigError
    std::string fingerprint() const;
};

/// Unknown keys are rejected; all values are range-checked.
PipelineConfig config_from_text(const std::string& text);
PipelineConfig load_config_file(const std::string& path);
std::string config_to_text(const PipelineConfig& cfg);

struct HotspotResult {
    double reference_c = 0.0;
    std::vector<HotspotFlag> cells;
};

/// Per-image output of the detection pipeline. Self-describing and free of
/// timestamps or absolute paths so golden-file comparisons stay stable.
struct DetectionsDocument {
    int schema_version = 1;
    std::string image;
    std::string config_fingerprint;
    std::vector<LineRT> lines;  // grouped proposals
    std::vector<Point2d> corners;
    std::vector<PanelQuad> panels;
    int prominent_panel = -1;
    std::optional<HotspotResult> hotspots;
    std::vector<std::string> warnings;
};

std::string detections_to_text(const DetectionsDocument& doc);
DetectionsDocument detections_from_text(const std::string& text);

/// Intermediate artifacts for --debug-dir dumps.
struct DetectDebug {
    EdgeMap edges;
    HoughAccumulator accumulator;
    std::optional<RectifiedPanel> stretched_panel;
};

/// The full per-image pipeline: mask -> blur -> Canny -> Hough -> group ->
/// grid -> prominent panel -> rectify -> stretch -> hotspot.
DetectionsDocument detect_image(const GrayImage& img, const CalibrationSidecar& sidecar,
                                const PipelineConfig& cfg, const std::string& image_name,
                                DetectDebug* debug = nullptr);

struct RunDetectResult {
    int processed = 0;
    int failed = 0;
    std::vector<std::string> errors;  // one message per failed input
};

/// Batch detection over image files. The calibration sidecar sits next to
/// each image with its extension replaced by calib_suffix. Per-file errors
/// are collected and the remaining inputs still run. Documents are written
/// atomically to out_dir/<stem>.json.
RunDetectResult run_detect(const std::vector<std::string>& image_paths,
                           const std::string& calib_suffix, const std::string& out_dir,
                           const PipelineConfig& cfg,
                           const std::optional<std::string>& debug_dir, int jobs);

struct PerImageEval {
    std::string image;
    long tp = 0, err = 0, fp = 0, fn = 0, total = 0;
    double corner_recall = 0.0;
    double panel_recall = 0.0;
};

struct EvalOutcome {
    MetricsReport metrics;  // computed once on the aggregated counts
    double corner_recall = 0.0;
    double panel_recall = 0.0;
    std::vector<PerImageEval> per_image;
    std::vector<std::string> warnings;
};

/// Matches every detections document in pred_dir against the label file with
/// the same image name in truth_dir, aggregates counts over the corpus and
/// computes the metrics once on the totals.
EvalOutcome run_eval(const std::string& pred_dir, const std::string& truth_dir,
                     const PipelineConfig& cfg);

/// Renders the scene spec file and writes image + sidecar + labels.
void run_synth(const std::string& spec_file, const std::string& out_dir);

}  // namespace pvscan
