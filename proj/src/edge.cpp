#include "pvscan/edge.hpp"

#include <algorithm>
#include <cmath>

namespace pvscan {

std::size_t EdgeMap::count() const {
    std::size_t n = 0;
    for (std::uint8_t e : edges) n += e != 0;
    return n;
}

namespace {

std::vector<double> gaussian_kernel(double sigma) {
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> w(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        w[i + radius] = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
        sum += w[i + radius];
    }
    for (double& v : w) v /= sum;
    return w;
}

}  // namespace

GrayImage gaussian_blur(const GrayImage& img, double sigma) {
    if (!(sigma > 0.0)) throw NonPositiveSigma("gaussian_blur requires sigma > 0");
    const std::vector<double> kernel = gaussian_kernel(sigma);
    const int radius = static_cast<int>(kernel.size() / 2);
    const int w = img.width;
    const int h = img.height;

    // Horizontal pass into a floating intermediate; invalid centers pass
    // their sample through untouched.
    std::vector<double> tmp(img.samples.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t idx = img.index(x, y);
            if (!img.valid[idx]) {
                tmp[idx] = img.samples[idx];
                continue;
            }
            double num = 0.0, den = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                const int xx = x + i;
                if (xx < 0 || xx >= w || !img.valid[img.index(xx, y)]) continue;
                num += kernel[i + radius] * img.samples[img.index(xx, y)];
                den += kernel[i + radius];
            }
            tmp[idx] = num / den;
        }
    }

    GrayImage out = img;
    const double pmax = img.max_value();
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t idx = img.index(x, y);
            if (!img.valid[idx]) continue;
            double num = 0.0, den = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                const int yy = y + i;
                if (yy < 0 || yy >= h || !img.valid[img.index(x, yy)]) continue;
                num += kernel[i + radius] * tmp[img.index(x, yy)];
                den += kernel[i + radius];
            }
            out.samples[idx] =
                static_cast<std::uint16_t>(std::llround(std::clamp(num / den, 0.0, pmax)));
        }
    }
    return out;
}

GradientField sobel_gradients(const GrayImage& img) {
    GradientField g;
    g.width = img.width;
    g.height = img.height;
    const std::size_t n = img.samples.size();
    g.gx.assign(n, 0.0);
    g.gy.assign(n, 0.0);
    g.magnitude.assign(n, 0.0);
    g.direction.assign(n, 0.0);

    for (int y = 1; y < img.height - 1; ++y) {
        for (int x = 1; x < img.width - 1; ++x) {
            bool usable = true;
            for (int dy = -1; dy <= 1 && usable; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (!img.valid[img.index(x + dx, y + dy)]) {
                        usable = false;
                        break;
                    }
                }
            }
            if (!usable) continue;

            const auto p = [&](int dx, int dy) {
                return static_cast<double>(img.samples[img.index(x + dx, y + dy)]);
            };
            const double gx = (p(1, -1) + 2.0 * p(1, 0) + p(1, 1)) -
                              (p(-1, -1) + 2.0 * p(-1, 0) + p(-1, 1));
            const double gy = (p(-1, 1) + 2.0 * p(0, 1) + p(1, 1)) -
                              (p(-1, -1) + 2.0 * p(0, -1) + p(1, -1));
            const std::size_t idx = img.index(x, y);
            g.gx[idx] = gx;
            g.gy[idx] = gy;
            g.magnitude[idx] = std::hypot(gx, gy);
            double dir = std::atan2(gy, gx);
            if (dir < 0.0) dir += M_PI;
            if (dir >= M_PI) dir -= M_PI;
            g.direction[idx] = dir;
        }
    }
    return g;
}

namespace {

// Offsets of the two neighbours along the quantized gradient direction.
void direction_neighbors(double dir, int& dx, int& dy) {
    const int bin = static_cast<int>(std::lround(dir / (M_PI / 4.0))) % 4;
    switch (bin) {
        case 0: dx = 1; dy = 0; break;   // gradient ~horizontal
        case 1: dx = 1; dy = 1; break;   // 45 deg
        case 2: dx = 0; dy = 1; break;   // vertical
        default: dx = -1; dy = 1; break; // 135 deg
    }
}

}  // namespace

EdgeMap canny(const GrayImage& img, double low, double high, double sigma) {
    if (!(low > 0.0) || low > high) {
        throw BadThresholds("canny requires 0 < low <= high");
    }
    const GrayImage blurred = gaussian_blur(img, sigma);
    const GradientField grad = sobel_gradients(blurred);

    const int w = img.width;
    const int h = img.height;
    EdgeMap out;
    out.width = w;
    out.height = h;
    out.edges.assign(img.samples.size(), 0);

    // Non-maximum suppression: survivors have magnitude >= both neighbours
    // along the quantized gradient direction. Out-of-bounds neighbours count
    // as zero.
    std::vector<std::uint8_t> keep(img.samples.size(), 0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t idx = grad.index(x, y);
            const double m = grad.magnitude[idx];
            if (m <= 0.0 || m < low) continue;
            int dx = 0, dy = 0;
            direction_neighbors(grad.direction[idx], dx, dy);
            const auto mag_at = [&](int xx, int yy) {
                if (xx < 0 || xx >= w || yy < 0 || yy >= h) return 0.0;
                return grad.magnitude[grad.index(xx, yy)];
            };
            if (m >= mag_at(x + dx, y + dy) && m >= mag_at(x - dx, y - dy)) {
                keep[idx] = 1;
            }
        }
    }

    // Hysteresis from strong seeds through surviving weak pixels.
    std::vector<std::size_t> stack;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t idx = grad.index(x, y);
            if (keep[idx] && grad.magnitude[idx] >= high && !out.edges[idx]) {
                out.edges[idx] = 1;
                stack.push_back(idx);
                while (!stack.empty()) {
                    const std::size_t cur = stack.back();
                    stack.pop_back();
                    const int cx = static_cast<int>(cur % w);
                    const int cy = static_cast<int>(cur / w);
                    for (int ddy = -1; ddy <= 1; ++ddy) {
                        for (int ddx = -1; ddx <= 1; ++ddx) {
                            const int nx = cx + ddx;
                            const int ny = cy + ddy;
                            if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                            const std::size_t nidx = grad.index(nx, ny);
                            if (!out.edges[nidx] && keep[nidx]) {
                                out.edges[nidx] = 1;
                                stack.push_back(nidx);
                            }
                        }
                    }
                }
            }
        }
    }
    return out;
}

GrayImage edge_map_to_image(const EdgeMap& edges) {
    GrayImage img = GrayImage::filled(edges.width, edges.height, 8, 0);
    for (std::size_t i = 0; i < edges.edges.size(); ++i) {
        if (edges.edges[i]) img.samples[i] = 255;
    }
    return img;
}

}  // namespace pvscan
