#include "pvscan/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include <json.hpp>

#include "pvscan/fileio.hpp"
#include "pvscan/rectify.hpp"

namespace pvscan {

namespace {

void validate_spec(const SceneSpec& spec) {
    if (spec.img_w < 8 || spec.img_h < 8) throw InvalidSpec("image too small");
    if (spec.grid_rows < 1 || spec.grid_cols < 1) throw InvalidSpec("grid must be >= 1x1");
    if (spec.cell_rows < 1 || spec.cell_cols < 1) throw InvalidSpec("cell grid must be >= 1x1");
    if (spec.frame_px < 2.0) throw InvalidSpec("frame line width must be >= 2 px");
    if (spec.noise_sigma < 0.0) throw InvalidSpec("noise sigma must be >= 0");
    PanelQuad quad{spec.corners};
    if (!quad_is_simple(quad)) throw InvalidSpec("array corners must form a simple quad");
    for (const Point2d& c : spec.corners) {
        if (c.x < 0.0 || c.x > spec.img_w - 1 || c.y < 0.0 || c.y > spec.img_h - 1) {
            throw InvalidSpec("array corners must lie inside the image");
        }
    }
    const int panels = spec.grid_rows * spec.grid_cols;
    for (const HotspotSpec& h : spec.hotspots) {
        if (h.panel_index < 0 || h.panel_index >= panels || h.cell_row < 0 ||
            h.cell_row >= spec.cell_rows || h.cell_col < 0 || h.cell_col >= spec.cell_cols) {
            throw InvalidSpec("hotspot outside the panel/cell grid");
        }
    }
}

// Uniform in (0, 1]; keeps log() finite in the Box-Muller transform.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

double normal_sample(std::mt19937_64& rng) {
    const double u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace

RenderedScene render_scene(const SceneSpec& spec, const std::string& image_name) {
    validate_spec(spec);

    const int rows = spec.grid_rows;
    const int cols = spec.grid_cols;

    // Projective map from the unit square onto the outer quad; grid lines in
    // unit coordinates stay straight lines in the image.
    const std::array<Point2d, 4> unit = {{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
    const Homography to_image = homography_from_points(unit, spec.corners);
    const Homography to_unit = to_image.inverse();

    ImageTruth truth;
    truth.image = image_name;
    std::vector<std::array<Point2d, 2>> frame_segments;
    for (int i = 0; i <= cols; ++i) {
        const double u = static_cast<double>(i) / cols;
        const Point2d a = to_image.apply({u, 0.0});
        const Point2d b = to_image.apply({u, 1.0});
        truth.lines.push_back({a.x, a.y, b.x, b.y});
        frame_segments.push_back({a, b});
    }
    for (int j = 0; j <= rows; ++j) {
        const double v = static_cast<double>(j) / rows;
        const Point2d a = to_image.apply({0.0, v});
        const Point2d b = to_image.apply({1.0, v});
        truth.lines.push_back({a.x, a.y, b.x, b.y});
        frame_segments.push_back({a, b});
    }
    for (int j = 0; j <= rows; ++j) {
        for (int i = 0; i <= cols; ++i) {
            truth.keypoints.push_back(
                to_image.apply({static_cast<double>(i) / cols, static_cast<double>(j) / rows}));
        }
    }
    for (int j = 0; j < rows; ++j) {
        for (int i = 0; i < cols; ++i) {
            const double u0 = static_cast<double>(i) / cols;
            const double u1 = static_cast<double>(i + 1) / cols;
            const double v0 = static_cast<double>(j) / rows;
            const double v1 = static_cast<double>(j + 1) / rows;
            truth.panels.push_back(PanelQuad{{to_image.apply({u0, v0}), to_image.apply({u1, v0}),
                                              to_image.apply({u1, v1}),
                                              to_image.apply({u0, v1})}});
        }
    }

    // Temperature field per pixel.
    std::vector<double> temps(static_cast<std::size_t>(spec.img_w) * spec.img_h);
    const double half_frame = spec.frame_px / 2.0;
    double t_min = std::min({spec.panel_temp_c, spec.frame_temp_c, spec.background_temp_c});
    double t_max = std::max({spec.panel_temp_c, spec.frame_temp_c, spec.background_temp_c});
    for (const HotspotSpec& h : spec.hotspots) {
        t_min = std::min(t_min, spec.panel_temp_c + h.delta_c);
        t_max = std::max(t_max, spec.panel_temp_c + h.delta_c);
    }

    for (int y = 0; y < spec.img_h; ++y) {
        for (int x = 0; x < spec.img_w; ++x) {
            const Point2d p{static_cast<double>(x), static_cast<double>(y)};
            double frame_dist = std::numeric_limits<double>::infinity();
            for (const auto& seg : frame_segments) {
                frame_dist = std::min(frame_dist, point_segment_distance(p, seg[0], seg[1]));
            }
            double t;
            if (frame_dist <= half_frame) {
                t = spec.frame_temp_c;
            } else {
                const Point2d uv = to_unit.apply(p);
                if (uv.x < 0.0 || uv.x > 1.0 || uv.y < 0.0 || uv.y > 1.0) {
                    t = spec.background_temp_c;
                } else {
                    t = spec.panel_temp_c;
                    const int pc = std::min(cols - 1, static_cast<int>(uv.x * cols));
                    const int pr = std::min(rows - 1, static_cast<int>(uv.y * rows));
                    const double pu = uv.x * cols - pc;
                    const double pv = uv.y * rows - pr;
                    const int cc = std::min(spec.cell_cols - 1,
                                            static_cast<int>(pu * spec.cell_cols));
                    const int cr = std::min(spec.cell_rows - 1,
                                            static_cast<int>(pv * spec.cell_rows));
                    const int panel_index = pr * cols + pc;
                    for (const HotspotSpec& h : spec.hotspots) {
                        if (h.panel_index == panel_index && h.cell_row == cr &&
                            h.cell_col == cc) {
                            t += h.delta_c;
                            break;
                        }
                    }
                }
            }
            temps[static_cast<std::size_t>(y) * spec.img_w + x] = t;
        }
    }

    RenderedScene scene;
    scene.truth = std::move(truth);
    scene.calib = {t_max, t_min, 255.0, 0.0};
    scene.image = GrayImage::filled(spec.img_w, spec.img_h, 8, 0);

    const double range = t_max - t_min;
    std::mt19937_64 rng(spec.seed);
    for (std::size_t i = 0; i < temps.size(); ++i) {
        double intensity = range > 0.0 ? (temps[i] - t_min) / range * 255.0 : 0.0;
        if (spec.noise_sigma > 0.0) {
            intensity += spec.noise_sigma * normal_sample(rng);
        }
        scene.image.samples[i] =
            static_cast<std::uint16_t>(std::llround(std::clamp(intensity, 0.0, 255.0)));
    }
    return scene;
}

SceneSpec scene_spec_from_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("scene spec is not valid JSON: ") + e.what());
    }
    SceneSpec spec;
    try {
        spec.img_w = j.value("img_w", spec.img_w);
        spec.img_h = j.value("img_h", spec.img_h);
        spec.grid_rows = j.at("grid_rows").get<int>();
        spec.grid_cols = j.at("grid_cols").get<int>();
        const auto& c = j.at("corners");
        if (c.size() != 4) throw ParseError("corners must list 4 points");
        for (std::size_t i = 0; i < 4; ++i) {
            spec.corners[i] = {c[i][0].get<double>(), c[i][1].get<double>()};
        }
        spec.panel_temp_c = j.value("panel_temp_c", spec.panel_temp_c);
        spec.frame_temp_c = j.value("frame_temp_c", spec.frame_temp_c);
        spec.background_temp_c = j.value("background_temp_c", spec.background_temp_c);
        spec.frame_px = j.value("frame_px", spec.frame_px);
        spec.noise_sigma = j.value("noise_sigma", spec.noise_sigma);
        spec.cell_rows = j.value("cell_rows", spec.cell_rows);
        spec.cell_cols = j.value("cell_cols", spec.cell_cols);
        spec.seed = j.value("seed", spec.seed);
        for (const auto& h : j.value("hotspots", nlohmann::json::array())) {
            spec.hotspots.push_back({h.at("panel").get<int>(), h.at("row").get<int>(),
                                     h.at("col").get<int>(), h.at("delta_c").get<double>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("scene spec fields missing or mistyped: ") + e.what());
    }
    return spec;
}

std::string scene_spec_to_text(const SceneSpec& spec) {
    nlohmann::json j;
    j["img_w"] = spec.img_w;
    j["img_h"] = spec.img_h;
    j["grid_rows"] = spec.grid_rows;
    j["grid_cols"] = spec.grid_cols;
    j["corners"] = nlohmann::json::array();
    for (const Point2d& c : spec.corners) j["corners"].push_back({c.x, c.y});
    j["panel_temp_c"] = spec.panel_temp_c;
    j["frame_temp_c"] = spec.frame_temp_c;
    j["background_temp_c"] = spec.background_temp_c;
    j["frame_px"] = spec.frame_px;
    j["noise_sigma"] = spec.noise_sigma;
    j["cell_rows"] = spec.cell_rows;
    j["cell_cols"] = spec.cell_cols;
    j["seed"] = spec.seed;
    j["hotspots"] = nlohmann::json::array();
    for (const HotspotSpec& h : spec.hotspots) {
        j["hotspots"].push_back({{"panel", h.panel_index},
                                 {"row", h.cell_row},
                                 {"col", h.cell_col},
                                 {"delta_c", h.delta_c}});
    }
    return j.dump(2) + "\n";
}

void write_scene_files(const SceneSpec& spec, const std::string& name,
                       const std::string& out_dir) {
    const RenderedScene scene = render_scene(spec, name);
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    save_pgm_file(scene.image, (dir / (name + ".pgm")).string());
    save_sidecar_file({scene.calib, {}}, (dir / (name + ".calib")).string());
    write_text_file((dir / (name + ".labels.json")).string(),
                    truth_to_text(scene.truth, kNoiseGeneratorId));
}

}  // namespace pvscan
