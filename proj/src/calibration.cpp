#include "bubbleuq/calibration.hpp"

#include "bubbleuq/error.hpp"
#include "bubbleuq/numfmt.hpp"

#include <cmath>
#include <string>

namespace bubbleuq {

double weighted_average(std::span<const double> values, std::span<const double> weights) {
    if (values.size() != weights.size()) {
        throw ArgumentError("weighted_average: " + std::to_string(values.size()) + " values but " +
                            std::to_string(weights.size()) + " weights");
    }
    if (values.empty()) throw ArgumentError("weighted_average: no values");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (weights[i] < 0.0) throw ArgumentError("weighted_average: negative weight");
        num += values[i] * weights[i];
        den += weights[i];
    }
    if (!(den > 0.0)) throw ArgumentError("weighted_average: total weight is zero");
    return num / den;
}

ErrorSummary summarize(std::span<const UncertaintyRow> rows) {
    std::vector<double> w, pa, ma, pp, mp;
    for (const UncertaintyRow& r : rows) {
        w.push_back(r.frequency);
        pa.push_back(r.pre_area);
        ma.push_back(r.me_area);
        pp.push_back(r.pre_perimeter);
        mp.push_back(r.me_perimeter);
    }
    return {weighted_average(pa, w), weighted_average(ma, w), weighted_average(pp, w),
            weighted_average(mp, w)};
}

std::size_t nearest_radius_index(std::span<const double> radii, double value) {
    if (radii.empty()) throw ArgumentError("no radii to match against");
    std::size_t best = 0;
    for (std::size_t i = 1; i < radii.size(); ++i) {
        const double d = std::abs(radii[i] - value);
        const double bd = std::abs(radii[best] - value);
        // Strictly closer wins; ties keep the smaller radius.
        if (d < bd || (d == bd && radii[i] < radii[best])) best = i;
    }
    return best;
}

UncertaintyTable build_uncertainty_table(const Histogram& histogram, const ErrorMatrix& matrix,
                                         double cell_size) {
    if (histogram.bins() == 0) throw ArgumentError("uncertainty table: histogram is empty");
    if (matrix.cells.empty() || matrix.radii.empty()) throw ArgumentError("uncertainty table: matrix is empty");
    const auto n_index = matrix.cell_size_index(cell_size);
    if (!n_index) {
        throw ArgumentError("error matrix has no column for cell size " + format_double(cell_size) +
                            " um; re-run the sweep at that resolution");
    }
    UncertaintyTable table;
    table.cell_size = cell_size;
    table.boundary_mode = matrix.boundary_mode;
    for (std::size_t b = 0; b < histogram.bins(); ++b) {
        const std::size_t r_index = nearest_radius_index(matrix.radii, histogram.midpoint(b));
        const CellResult& cell = matrix.at(*n_index, r_index);
        UncertaintyRow row;
        row.serial = b + 1;
        row.bin_lo = histogram.edges[b];
        row.bin_hi = histogram.edges[b + 1];
        row.matched_radius = cell.radius;
        row.frequency = histogram.counts[b];
        row.pre_area = cell.pre_area;
        row.me_area = cell.me_area;
        row.pre_perimeter = cell.pre_perimeter;
        row.me_perimeter = cell.me_perimeter;
        table.rows.push_back(row);
    }
    table.summary = summarize(table.rows);
    return table;
}

BoundaryComparison compare_boundary_modes(const Histogram& histogram, const ErrorMatrix& eroded,
                                          const ErrorMatrix& dilated, double cell_size) {
    if (eroded.cell_sizes != dilated.cell_sizes || eroded.radii != dilated.radii) {
        throw ArgumentError("compare_boundary_modes: matrices have different axes");
    }
    return {build_uncertainty_table(histogram, eroded, cell_size),
            build_uncertainty_table(histogram, dilated, cell_size)};
}

} // namespace bubbleuq
