#pragma once

#include "bubbleuq/bubbles.hpp"
#include "bubbleuq/uq_sim.hpp"

#include <span>
#include <string>

namespace bubbleuq {

// Minimal standalone SVG charts; no styling beyond what is needed to read them.

std::string histogram_svg(const Histogram& hist, const std::string& x_label);

/// PRE of area and perimeter against iteration count (log x axis).
std::string trace_svg(std::span<const TracePoint> trace);

} // namespace bubbleuq
