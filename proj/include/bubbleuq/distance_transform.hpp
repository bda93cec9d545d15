#pragma once

#include "bubbleuq/mask.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace bubbleuq {

/// Exact Euclidean distances in pixel units, stored squared so that integer
/// comparisons (e.g. "distance == 1") stay exact. Pixels with no feature
/// anywhere in the mask hold +infinity.
class DistanceGrid {
public:
    DistanceGrid(std::size_t width, std::size_t height, std::vector<double> squared)
        : width_(width), height_(height), squared_(std::move(squared)) {}

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }

    double squared(std::size_t x, std::size_t y) const noexcept { return squared_[y * width_ + x]; }
    double distance(std::size_t x, std::size_t y) const noexcept { return std::sqrt(squared(x, y)); }
    const std::vector<double>& squared_values() const noexcept { return squared_; }

    static constexpr double infinity = std::numeric_limits<double>::infinity();

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<double> squared_;
};

/// Distance from every pixel to the nearest DRY (nonzero) pixel. Two-pass
/// separable lower-envelope algorithm (Felzenszwalb & Huttenlocher).
DistanceGrid distance_transform(const BinaryMask& mask);

} // namespace bubbleuq
