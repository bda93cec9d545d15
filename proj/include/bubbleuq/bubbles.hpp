#pragma once

#include "bubbleuq/components.hpp"
#include "bubbleuq/mask.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace bubbleuq {

/// One connected DRY component.
///
/// `perimeter_px` is the size of the component's outer boundary ring: the
/// number of distinct pixel positions outside the component that share an
/// edge with one of its pixels. Positions beyond the frame count, so a bubble
/// clipped by the border is still closed. A single pixel has perimeter 4, a
/// 3x3 block 12.
struct BubbleRecord {
    std::uint32_t label = 0;
    std::size_t area_px = 0;
    std::size_t perimeter_px = 0;
    std::optional<double> area_phys;          // um^2
    std::optional<double> perimeter_phys;     // um
    std::optional<double> equiv_radius_phys;  // um, sqrt(area / pi)
};

std::vector<BubbleRecord> measure_bubbles(const BinaryMask& mask,
                                          Connectivity connectivity = Connectivity::Eight);

/// Outer boundary ring size of the whole DRY set (see BubbleRecord).
std::size_t outer_boundary_pixels(const BinaryMask& mask);

enum class BubbleField { Radius, Area, Perimeter };
enum class HistogramScale { Linear, Log };

BubbleField parse_bubble_field(std::string_view text);
HistogramScale parse_histogram_scale(std::string_view text);
std::string_view to_string(BubbleField f);
std::string_view to_string(HistogramScale s);

/// Physical value when the record has one; pixel units otherwise (radius in
/// pixels is sqrt(area_px / pi)).
double field_value(const BubbleRecord& record, BubbleField field);

/// Binned frequencies. Bin i covers [edges[i], edges[i+1]); the last bin is
/// closed at the top.
struct Histogram {
    std::vector<double> edges;
    std::vector<double> counts;
    HistogramScale scale = HistogramScale::Linear;

    std::size_t bins() const noexcept { return counts.size(); }
    double total() const noexcept;
    double midpoint(std::size_t bin) const { return 0.5 * (edges.at(bin) + edges.at(bin + 1)); }
    /// Bin holding `value`; values outside the edge range clamp to the end bins.
    std::size_t bin_of(double value) const;
};

/// Equal-width bins (in log10 space for Log) spanning [min, max] of `values`,
/// or the explicit `range` when given. A degenerate range is widened by 0.5
/// (value units, or decades for Log).
Histogram build_histogram(std::span<const double> values, std::size_t bins, HistogramScale scale,
                          std::optional<std::pair<double, double>> range = std::nullopt);
Histogram build_histogram(std::span<const BubbleRecord> records, BubbleField field, std::size_t bins,
                          HistogramScale scale);

struct BinSpec {
    BubbleField field = BubbleField::Radius;
    std::size_t bins = 10;
    HistogramScale scale = HistogramScale::Linear;
    std::optional<std::pair<double, double>> range;
};

/// Counts per (group, size bin). Rows follow the input group order.
struct GroupedDistribution {
    std::vector<double> group_values;
    std::vector<double> edges;
    HistogramScale scale = HistogramScale::Linear;
    std::vector<std::vector<double>> counts;
};

using BubbleGroup = std::pair<double, std::vector<BubbleRecord>>;

/// Shared edges come from `spec.range`, or from the pooled values of all
/// groups when no range is given.
GroupedDistribution grouped_distribution(std::span<const BubbleGroup> groups, const BinSpec& spec);

} // namespace bubbleuq
