#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "kpplab/grid.hpp"

namespace kpplab {

inline constexpr int64_t kEdtInf = std::numeric_limits<int64_t>::max() / 4;

// Exact Euclidean distance transform of a mask, per-dimension lower envelope
// of parabolas, linear time per axis. Squared distances are kept in integer
// cell units so results match a brute-force oracle bit for bit; requires
// uniform spacing. For every cell, `feature` receives the linear index of a
// nearest marked cell (kEdtInf distance and feature -1 when the mask is empty).
struct EdtResult {
    std::vector<int64_t> dist_sq_cells;  // squared distance, cell units
    std::vector<int64_t> feature;       // linear index of a nearest marked cell

    double dist_at(size_t idx, double h) const {
        if (dist_sq_cells[idx] >= kEdtInf) return std::numeric_limits<double>::infinity();
        return std::sqrt(static_cast<double>(dist_sq_cells[idx])) * h;
    }
};

EdtResult exact_edt(const GridMask& mask, bool of_complement = false);

}  // namespace kpplab
