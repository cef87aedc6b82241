#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pvscan/eval.hpp"
#include "pvscan/image.hpp"

namespace pvscan {

struct HotspotSpec {
    int panel_index = 0;  // row-major panel index in the array grid
    int cell_row = 0;     // cell within the panel's cell grid
    int cell_col = 0;
    double delta_c = 0.0;
};

/// Description of a synthetic thermal scene: a grid of panels inside a
/// perspective-distorted outer quadrilateral, with frame lines between
/// panels and optional elevated hotspot cells.
struct SceneSpec {
    int img_w = 480;
    int img_h = 320;
    int grid_rows = 3;
    int grid_cols = 4;
    std::array<Point2d, 4> corners{};  // TL, TR, BR, BL of the array
    double panel_temp_c = 33.0;
    double frame_temp_c = 20.0;
    double background_temp_c = 22.0;
    double frame_px = 3.0;  // full frame line width; must be >= 2
    double noise_sigma = 0.0;
    int cell_rows = 10;  // hotspot cell layout within each panel
    int cell_cols = 6;
    std::vector<HotspotSpec> hotspots;
    std::uint64_t seed = 0;
};

/// PRNG identifier recorded with every generated scene: mt19937_64 driving
/// the cosine branch of a Box-Muller transform, one normal per pixel in
/// row-major order.
inline constexpr const char* kNoiseGeneratorId = "mt19937_64-boxmuller-v1";

struct RenderedScene {
    GrayImage image;
    TempCalibration calib;
    ImageTruth truth;
};

/// Deterministic scene render. The calibration anchors the scene's extreme
/// temperatures at intensities 0 and 255. Ground truth holds the frame
/// centerlines, their intersections and the panel polygons.
RenderedScene render_scene(const SceneSpec& spec, const std::string& image_name = "scene");

SceneSpec scene_spec_from_text(const std::string& text);
std::string scene_spec_to_text(const SceneSpec& spec);

/// Writes <name>.pgm, <name>.calib and <name>.labels.json into out_dir.
void write_scene_files(const SceneSpec& spec, const std::string& name,
                       const std::string& out_dir);

}  // namespace pvscan
