#include "bubbleuq/boiling_metrics.hpp"

#include "bubbleuq/distance_transform.hpp"
#include "bubbleuq/error.hpp"

#include <algorithm>
#include <cmath>

namespace bubbleuq {

double dry_area_fraction(const BinaryMask& mask) {
    return static_cast<double>(mask.dry_count()) / static_cast<double>(mask.size());
}

std::size_t contact_line_pixels(const BinaryMask& mask) {
    const DistanceGrid d = distance_transform(invert(mask));
    const auto& sq = d.squared_values();
    return static_cast<std::size_t>(std::count(sq.begin(), sq.end(), 1.0));
}

double contact_line_density(const BinaryMask& mask) {
    return static_cast<double>(contact_line_pixels(mask)) / static_cast<double>(mask.size());
}

BoilingMetrics compute_boiling_metrics(const BinaryMask& mask) {
    BoilingMetrics m;
    m.total_pixels = mask.size();
    m.dry_pixels = mask.dry_count();
    m.contact_pixels = contact_line_pixels(mask);
    m.theta_dry = static_cast<double>(m.dry_pixels) / static_cast<double>(m.total_pixels);
    m.rho_cl_pixel = static_cast<double>(m.contact_pixels) / static_cast<double>(m.total_pixels);
    if (mask.resolution()) {
        m = physicalize(m, mask.resolution()->um_per_px());
    }
    return m;
}

BoilingMetrics physicalize(BoilingMetrics metrics, double resolution_um_per_px) {
    if (!(std::isfinite(resolution_um_per_px) && resolution_um_per_px > 0.0)) {
        throw ArgumentError("physicalize: resolution must be > 0");
    }
    metrics.rho_cl_physical = metrics.rho_cl_pixel / resolution_um_per_px;
    return metrics;
}

} // namespace bubbleuq
