#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pvscan/errors.hpp"

namespace pvscan {

/// Grayscale intensity image with a per-pixel validity mask.
///
/// Samples are stored row-major. Masked (invalid) pixels keep their sample
/// value; every statistic and detection stage downstream must skip them.
struct GrayImage {
    int width = 0;
    int height = 0;
    int bit_depth = 8;  // 8 or 16
    std::vector<std::uint16_t> samples;
    std::vector<std::uint8_t> valid;

    static GrayImage filled(int width, int height, int bit_depth, std::uint16_t value);

    int max_value() const { return (1 << bit_depth) - 1; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + x;
    }
    std::uint16_t at(int x, int y) const { return samples[index(x, y)]; }
    bool valid_at(int x, int y) const { return valid[index(x, y)] != 0; }
    void set(int x, int y, std::uint16_t v) { samples[index(x, y)] = v; }
    void set_valid(int x, int y, bool v) { valid[index(x, y)] = v ? 1 : 0; }
};

/// Affine map between pixel intensity and degrees Celsius, anchored at the
/// scale-bar extremes read off the camera overlay.
struct TempCalibration {
    double t_high_c = 0.0;
    double t_low_c = 0.0;
    double p_high = 0.0;
    double p_low = 0.0;
};

struct MaskRegion {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;
};

/// Binary PGM (P5). maxval <= 255 loads as 8-bit; 256..65535 as 16-bit with
/// big-endian sample pairs. `#` comments in the header are skipped.
GrayImage load_pgm(const std::vector<std::uint8_t>& bytes);

/// Canonical P5 bytes: "P5\n<w> <h>\n<maxval>\n" + raw samples.
/// load_pgm(save_pgm(img)) reproduces samples bit-exactly.
std::vector<std::uint8_t> save_pgm(const GrayImage& img);

GrayImage load_pgm_file(const std::string& path);
void save_pgm_file(const GrayImage& img, const std::string& path);

/// t_low + (p - p_low) * (t_high - t_low) / (p_high - p_low).
/// Defined for any p; extrapolates beyond the anchors.
double temperature_at(const TempCalibration& calib, double p);

/// Marks pixels inside the regions invalid. Sample values are untouched.
/// Regions are clipped to the image; a region that clips to nothing is a no-op.
GrayImage mask_overlay(const GrayImage& img, const std::vector<MaskRegion>& regions);

/// Nearest-rank percentile over the sorted valid-sample multiset.
std::uint16_t valid_percentile(const GrayImage& img, double pct);

struct StretchResult {
    GrayImage image;
    TempCalibration calib;
    bool degenerate_range = false;
};

/// Linear stretch of [lo_pct, hi_pct] percentile intensities onto the full
/// range, with the calibration re-anchored so temperatures are preserved up
/// to quantization. A degenerate percentile range (lo == hi intensity)
/// returns the input unchanged with the warning flag set.
StretchResult contrast_stretch(const GrayImage& img, double lo_pct, double hi_pct,
                               const TempCalibration& calib);

/// Calibration sidecar: temperature anchors plus camera-overlay mask regions.
struct CalibrationSidecar {
    TempCalibration calib;
    std::vector<MaskRegion> overlay_masks;
};

CalibrationSidecar sidecar_from_text(const std::string& text);
std::string sidecar_to_text(const CalibrationSidecar& sc);
CalibrationSidecar load_sidecar_file(const std::string& path);
void save_sidecar_file(const CalibrationSidecar& sc, const std::string& path);

}  // namespace pvscan
