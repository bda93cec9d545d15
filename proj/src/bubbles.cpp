#include "bubbleuq/bubbles.hpp"

#include "bubbleuq/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace bubbleuq {

std::vector<BubbleRecord> measure_bubbles(const BinaryMask& mask, Connectivity connectivity) {
    const LabelGrid grid = label_components(mask, connectivity);
    std::vector<BubbleRecord> records(grid.count);
    for (std::uint32_t i = 0; i < grid.count; ++i) records[i].label = i + 1;

    const std::size_t w = grid.width;
    const std::size_t h = grid.height;
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const std::uint32_t l = grid.at(x, y);
            if (l != 0) {
                BubbleRecord& r = records[l - 1];
                ++r.area_px;
                // Virtual out-of-frame neighbours: one per exposed frame side.
                r.perimeter_px += (x == 0) + (x + 1 == w) + (y == 0) + (y + 1 == h);
                continue;
            }
            // WET pixel: one ring pixel for every distinct adjacent label.
            std::uint32_t seen[4];
            int n_seen = 0;
            const auto visit = [&](std::uint32_t nl) {
                if (nl == 0) return;
                for (int k = 0; k < n_seen; ++k) {
                    if (seen[k] == nl) return;
                }
                seen[n_seen++] = nl;
                ++records[nl - 1].perimeter_px;
            };
            if (x > 0) visit(grid.at(x - 1, y));
            if (x + 1 < w) visit(grid.at(x + 1, y));
            if (y > 0) visit(grid.at(x, y - 1));
            if (y + 1 < h) visit(grid.at(x, y + 1));
        }
    }

    if (mask.resolution()) {
        const double res = mask.resolution()->um_per_px();
        for (BubbleRecord& r : records) {
            r.area_phys = static_cast<double>(r.area_px) * res * res;
            r.perimeter_phys = static_cast<double>(r.perimeter_px) * res;
            r.equiv_radius_phys = std::sqrt(*r.area_phys / std::numbers::pi);
        }
    }
    return records;
}

std::size_t outer_boundary_pixels(const BinaryMask& mask) {
    const std::size_t w = mask.width();
    const std::size_t h = mask.height();
    std::size_t count = 0;
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            if (mask.dry(x, y)) {
                count += (x == 0) + (x + 1 == w) + (y == 0) + (y + 1 == h);
            } else if ((x > 0 && mask.dry(x - 1, y)) || (x + 1 < w && mask.dry(x + 1, y)) ||
                       (y > 0 && mask.dry(x, y - 1)) || (y + 1 < h && mask.dry(x, y + 1))) {
                ++count;
            }
        }
    }
    return count;
}

BubbleField parse_bubble_field(std::string_view text) {
    if (text == "radius") return BubbleField::Radius;
    if (text == "area") return BubbleField::Area;
    if (text == "perimeter") return BubbleField::Perimeter;
    throw ArgumentError("unknown bubble field '" + std::string(text) + "'");
}

HistogramScale parse_histogram_scale(std::string_view text) {
    if (text == "linear") return HistogramScale::Linear;
    if (text == "log") return HistogramScale::Log;
    throw ArgumentError("unknown histogram scale '" + std::string(text) + "'");
}

std::string_view to_string(BubbleField f) {
    switch (f) {
    case BubbleField::Radius: return "radius";
    case BubbleField::Area: return "area";
    case BubbleField::Perimeter: return "perimeter";
    }
    return "?";
}

std::string_view to_string(HistogramScale s) { return s == HistogramScale::Log ? "log" : "linear"; }

double field_value(const BubbleRecord& r, BubbleField field) {
    switch (field) {
    case BubbleField::Radius:
        return r.equiv_radius_phys ? *r.equiv_radius_phys
                                   : std::sqrt(static_cast<double>(r.area_px) / std::numbers::pi);
    case BubbleField::Area:
        return r.area_phys ? *r.area_phys : static_cast<double>(r.area_px);
    case BubbleField::Perimeter:
        return r.perimeter_phys ? *r.perimeter_phys : static_cast<double>(r.perimeter_px);
    }
    return 0.0;
}

double Histogram::total() const noexcept { return std::accumulate(counts.begin(), counts.end(), 0.0); }

std::size_t Histogram::bin_of(double value) const {
    const auto it = std::upper_bound(edges.begin(), edges.end(), value);
    if (it == edges.begin()) return 0;
    const auto idx = static_cast<std::size_t>(it - edges.begin()) - 1;
    return std::min(idx, bins() - 1);
}

namespace {

std::vector<double> make_edges(double lo, double hi, std::size_t bins, HistogramScale scale) {
    if (scale == HistogramScale::Log) {
        lo = std::log10(lo);
        hi = std::log10(hi);
    }
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
    std::vector<double> edges(bins + 1);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (std::size_t i = 0; i <= bins; ++i) {
        const double e = (i == bins) ? hi : lo + width * static_cast<double>(i);
        edges[i] = scale == HistogramScale::Log ? std::pow(10.0, e) : e;
    }
    return edges;
}

void check_log_values(std::span<const double> values, HistogramScale scale) {
    if (scale != HistogramScale::Log) return;
    for (double v : values) {
        if (!(v > 0.0)) {
            throw ArgumentError("log-scale histogram requires values > 0, got " + std::to_string(v));
        }
    }
}

} // namespace

Histogram build_histogram(std::span<const double> values, std::size_t bins, HistogramScale scale,
                          std::optional<std::pair<double, double>> range) {
    if (bins == 0) throw ArgumentError("histogram needs at least one bin");
    if (values.empty() && !range) throw ArgumentError("histogram needs at least one value");
    check_log_values(values, scale);
    double lo, hi;
    if (range) {
        std::tie(lo, hi) = *range;
        if (!(hi >= lo) || (scale == HistogramScale::Log && !(lo > 0.0))) {
            throw ArgumentError("invalid histogram range");
        }
    } else {
        const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
        lo = *mn;
        hi = *mx;
    }
    Histogram hist;
    hist.scale = scale;
    hist.edges = make_edges(lo, hi, bins, scale);
    hist.counts.assign(bins, 0.0);
    for (double v : values) hist.counts[hist.bin_of(v)] += 1.0;
    return hist;
}

Histogram build_histogram(std::span<const BubbleRecord> records, BubbleField field, std::size_t bins,
                          HistogramScale scale) {
    if (records.empty()) throw ArgumentError("histogram needs at least one bubble record");
    std::vector<double> values;
    values.reserve(records.size());
    for (const BubbleRecord& r : records) values.push_back(field_value(r, field));
    return build_histogram(values, bins, scale);
}

GroupedDistribution grouped_distribution(std::span<const BubbleGroup> groups, const BinSpec& spec) {
    if (groups.empty()) throw ArgumentError("grouped distribution needs at least one group");
    std::vector<std::vector<double>> per_group;
    std::vector<double> pooled;
    for (const auto& [value, records] : groups) {
        auto& vals = per_group.emplace_back();
        for (const BubbleRecord& r : records) vals.push_back(field_value(r, spec.field));
        pooled.insert(pooled.end(), vals.begin(), vals.end());
    }
    // Shared edges from the pooled sample (or the explicit range).
    const Histogram shape = build_histogram(pooled, spec.bins, spec.scale, spec.range);

    GroupedDistribution out;
    out.edges = shape.edges;
    out.scale = spec.scale;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        out.group_values.push_back(groups[g].first);
        std::vector<double> row(spec.bins, 0.0);
        for (double v : per_group[g]) row[shape.bin_of(v)] += 1.0;
        out.counts.push_back(std::move(row));
    }
    return out;
}

} // namespace bubbleuq
