#pragma once

#include <vector>

#include "pvscan/rectify.hpp"

namespace pvscan {

struct CellStats {
    double mean_c = 0.0;
    double max_c = 0.0;
    double valid_fraction = 0.0;  // mean/max are meaningless when this is 0
};

/// rows x cols cells tiling the rectified panel; remainder pixels go to the
/// last row/column.
struct CellGrid {
    int rows = 0;
    int cols = 0;
    std::vector<CellStats> cells;  // row-major

    const CellStats& at(int row, int col) const {
        return cells[static_cast<std::size_t>(row) * cols + col];
    }
};

/// Per-cell mean/max temperature over valid pixels.
CellGrid cell_stats(const RectifiedPanel& panel, int rows, int cols);

struct HotspotFlag {
    int row = 0;
    int col = 0;
    double delta_c = 0.0;  // cell mean minus the panel reference temperature
};

struct HotspotReport {
    std::vector<HotspotFlag> flagged;  // row-major order
    double reference_c = 0.0;          // median cell mean over covered cells
};

/// Flags cells whose mean temperature exceeds the panel median by more than
/// delta_threshold_c. Cells with coverage below min_valid_fraction (or with
/// no valid pixels at all) neither vote for the median nor get flagged.
HotspotReport flag_hotspots(const CellGrid& cells, double delta_threshold_c,
                            double min_valid_fraction);

}  // namespace pvscan
