#pragma once

#include "bubbleuq/bubbles.hpp"
#include "bubbleuq/uq_sim.hpp"

#include <span>
#include <vector>

namespace bubbleuq {

/// Frequency-weighted mean: sum(v_i * w_i) / sum(w_i).
double weighted_average(std::span<const double> values, std::span<const double> weights);

struct UncertaintyRow {
    std::size_t serial = 0;  // 1-based, ascending radius
    double bin_lo = 0;
    double bin_hi = 0;
    double matched_radius = 0;
    double frequency = 0;
    double pre_area = 0;
    double me_area = 0;
    double pre_perimeter = 0;
    double me_perimeter = 0;
};

struct ErrorSummary {
    double pre_area = 0;
    double me_area = 0;
    double pre_perimeter = 0;
    double me_perimeter = 0;
};

struct UncertaintyTable {
    double cell_size = 0;
    BoundaryMode boundary_mode = BoundaryMode::None;
    std::vector<UncertaintyRow> rows;
    ErrorSummary summary;
};

/// Recomputes the weighted summary from the rows.
ErrorSummary summarize(std::span<const UncertaintyRow> rows);

/// Each histogram bin is matched to the matrix radius nearest its midpoint
/// (ties go to the smaller radius) in the column for cell size `cell_size`,
/// which must be present exactly. Empty bins are kept with frequency 0.
UncertaintyTable build_uncertainty_table(const Histogram& histogram, const ErrorMatrix& matrix,
                                         double cell_size);

struct BoundaryComparison {
    UncertaintyTable eroded;
    UncertaintyTable dilated;
};

/// Both matrices must share axes.
BoundaryComparison compare_boundary_modes(const Histogram& histogram, const ErrorMatrix& eroded,
                                          const ErrorMatrix& dilated, double cell_size);

std::size_t nearest_radius_index(std::span<const double> radii, double value);

} // namespace bubbleuq
