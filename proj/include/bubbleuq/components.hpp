#pragma once

#include "bubbleuq/mask.hpp"

#include <cstdint>
#include <vector>

namespace bubbleuq {

enum class Connectivity { Four = 4, Eight = 8 };

Connectivity parse_connectivity(int value);

/// Component labels: 0 for WET, 1..count for DRY components. Labels follow
/// the row-major order of each component's first pixel.
struct LabelGrid {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint32_t> labels;
    std::uint32_t count = 0;

    std::uint32_t at(std::size_t x, std::size_t y) const noexcept { return labels[y * width + x]; }
};

LabelGrid label_components(const BinaryMask& mask, Connectivity connectivity = Connectivity::Eight);

} // namespace bubbleuq
