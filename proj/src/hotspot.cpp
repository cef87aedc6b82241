#include "pvscan/hotspot.hpp"

#include <algorithm>
#include <cmath>

namespace pvscan {

CellGrid cell_stats(const RectifiedPanel& panel, int rows, int cols) {
    const GrayImage& img = panel.image;
    if (rows < 1 || cols < 1) throw InvalidArgument("cell grid must be at least 1x1");
    if (img.width < cols || img.height < rows) {
        throw GridTooFine("cell grid finer than the rectified image");
    }

    CellGrid grid;
    grid.rows = rows;
    grid.cols = cols;
    grid.cells.assign(static_cast<std::size_t>(rows) * cols, CellStats{});

    const int base_w = img.width / cols;
    const int base_h = img.height / rows;
    for (int row = 0; row < rows; ++row) {
        const int y0 = row * base_h;
        const int y1 = (row == rows - 1) ? img.height : y0 + base_h;
        for (int col = 0; col < cols; ++col) {
            const int x0 = col * base_w;
            const int x1 = (col == cols - 1) ? img.width : x0 + base_w;

            double sum = 0.0;
            double max_c = -std::numeric_limits<double>::infinity();
            long count = 0;
            for (int y = y0; y < y1; ++y) {
                for (int x = x0; x < x1; ++x) {
                    if (!img.valid_at(x, y)) continue;
                    const double t = temperature_at(panel.calib, img.at(x, y));
                    sum += t;
                    max_c = std::max(max_c, t);
                    ++count;
                }
            }
            CellStats& cell = grid.cells[static_cast<std::size_t>(row) * cols + col];
            const long total = static_cast<long>(y1 - y0) * (x1 - x0);
            cell.valid_fraction = static_cast<double>(count) / static_cast<double>(total);
            if (count > 0) {
                cell.mean_c = sum / static_cast<double>(count);
                cell.max_c = max_c;
            }
        }
    }
    return grid;
}

HotspotReport flag_hotspots(const CellGrid& cells, double delta_threshold_c,
                            double min_valid_fraction) {
    if (!(delta_threshold_c > 0.0)) throw InvalidArgument("delta threshold must be > 0");
    if (min_valid_fraction < 0.0 || min_valid_fraction > 1.0) {
        throw InvalidArgument("min_valid_fraction must be in [0, 1]");
    }

    std::vector<double> means;
    for (const CellStats& c : cells.cells) {
        if (c.valid_fraction >= min_valid_fraction && c.valid_fraction > 0.0) {
            means.push_back(c.mean_c);
        }
    }
    if (means.empty()) throw NoValidCells("no cell meets the coverage requirement");

    // Even-count median takes the lower middle value.
    std::sort(means.begin(), means.end());
    const double reference_c = means[(means.size() - 1) / 2];

    HotspotReport report;
    report.reference_c = reference_c;
    for (int row = 0; row < cells.rows; ++row) {
        for (int col = 0; col < cells.cols; ++col) {
            const CellStats& c = cells.at(row, col);
            if (c.valid_fraction < min_valid_fraction || c.valid_fraction <= 0.0) continue;
            const double delta = c.mean_c - reference_c;
            if (delta > delta_threshold_c) report.flagged.push_back({row, col, delta});
        }
    }
    return report;
}

}  // namespace pvscan
