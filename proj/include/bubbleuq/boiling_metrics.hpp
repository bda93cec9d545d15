#pragma once

#include "bubbleuq/mask.hpp"

#include <cstddef>
#include <optional>

namespace bubbleuq {

/// Dry area fraction and contact line density of one frame. The integer
/// counts are kept so ratios can be compared exactly.
struct BoilingMetrics {
    std::size_t total_pixels = 0;
    std::size_t dry_pixels = 0;
    std::size_t contact_pixels = 0;

    double theta_dry = 0.0;
    double rho_cl_pixel = 0.0;
    /// Per micrometre; present iff a resolution was supplied.
    std::optional<double> rho_cl_physical;
};

double dry_area_fraction(const BinaryMask& mask);

/// DRY pixels whose exact distance to the nearest WET pixel is 1, per total
/// pixels.
double contact_line_density(const BinaryMask& mask);
std::size_t contact_line_pixels(const BinaryMask& mask);

/// Both metrics; physical density filled when the mask carries a resolution.
BoilingMetrics compute_boiling_metrics(const BinaryMask& mask);

/// Throws ArgumentError unless resolution_um_per_px > 0.
BoilingMetrics physicalize(BoilingMetrics metrics, double resolution_um_per_px);

} // namespace bubbleuq
