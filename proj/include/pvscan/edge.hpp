#pragma once

#include <vector>

#include "pvscan/image.hpp"

namespace pvscan {

/// Per-pixel Sobel gradients. Pixels whose 3x3 neighbourhood leaves the image
/// or touches an invalid pixel carry zero gradient and can never become edges.
struct GradientField {
    int width = 0;
    int height = 0;
    std::vector<double> gx;
    std::vector<double> gy;
    std::vector<double> magnitude;  // Euclidean norm
    std::vector<double> direction;  // radians in [0, pi)

    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + x;
    }
};

struct EdgeMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> edges;

    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + x;
    }
    bool at(int x, int y) const { return edges[index(x, y)] != 0; }
    std::size_t count() const;
};

/// Separable Gaussian smoothing with kernel radius ceil(3*sigma). The kernel
/// is normalized to sum 1; taps that fall outside the image or on invalid
/// pixels are dropped and the remaining weights renormalized (no reflection).
/// The floating intermediate is re-quantized to the image bit depth.
GrayImage gaussian_blur(const GrayImage& img, double sigma);

/// Standard 3x3 Sobel pair, unnormalized integer taps.
GradientField sobel_gradients(const GrayImage& img);

/// Gaussian blur -> Sobel -> non-maximum suppression (directions quantized to
/// 0/45/90/135 degrees) -> hysteresis. Pixels with magnitude >= high seed the
/// edge set; pixels >= low that are 8-connected to a seed are kept. Invalid
/// pixels produce no gradients and break connectivity.
EdgeMap canny(const GrayImage& img, double low, double high, double sigma);

/// 0/255 rendering for debug dumps.
GrayImage edge_map_to_image(const EdgeMap& edges);

}  // namespace pvscan
