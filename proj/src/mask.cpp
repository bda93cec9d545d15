#include "bubbleuq/mask.hpp"

#include "bubbleuq/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bubbleuq {

Resolution::Resolution(double um_per_px) : value_(um_per_px) {
    if (!(std::isfinite(um_per_px) && um_per_px > 0.0)) {
        throw ArgumentError("resolution must be a finite value > 0, got " + std::to_string(um_per_px));
    }
}

BinaryMask::BinaryMask(std::size_t width, std::size_t height, Pixel fill)
    : width_(width), height_(height) {
    if (width == 0 || height == 0) {
        throw ArgumentError("mask dimensions must be >= 1");
    }
    pixels_.assign(width * height, fill);
}

BinaryMask::BinaryMask(std::size_t width, std::size_t height, std::vector<Pixel> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width == 0 || height == 0) {
        throw ArgumentError("mask dimensions must be >= 1");
    }
    if (pixels_.size() != width * height) {
        throw ArgumentError("pixel count " + std::to_string(pixels_.size()) + " does not match " +
                            std::to_string(width) + "x" + std::to_string(height));
    }
}

std::size_t BinaryMask::dry_count() const noexcept {
    return static_cast<std::size_t>(std::count(pixels_.begin(), pixels_.end(), Pixel::Dry));
}

BinaryMask invert(const BinaryMask& mask) {
    BinaryMask out = mask;
    for (Pixel& p : out.pixels()) {
        p = (p == Pixel::Dry) ? Pixel::Wet : Pixel::Dry;
    }
    return out;
}

namespace {

// Rows are independent, so the big-mask case splits them across threads.
constexpr std::size_t kParallelPixels = 1u << 16;

template <bool Erode>
BinaryMask morph(const BinaryMask& mask) {
    const auto w = static_cast<std::ptrdiff_t>(mask.width());
    const auto h = static_cast<std::ptrdiff_t>(mask.height());
    BinaryMask out(mask.width(), mask.height());
    out.set_resolution(mask.resolution());
    const std::span<const Pixel> in = mask.pixels();
    std::span<Pixel> dst = out.pixels();

#pragma omp parallel for schedule(static) if (mask.size() >= kParallelPixels)
    for (std::ptrdiff_t y = 0; y < h; ++y) {
        for (std::ptrdiff_t x = 0; x < w; ++x) {
            bool all_dry = true;
            bool any_dry = false;
            for (std::ptrdiff_t dy = -1; dy <= 1; ++dy) {
                for (std::ptrdiff_t dx = -1; dx <= 1; ++dx) {
                    const std::ptrdiff_t nx = x + dx;
                    const std::ptrdiff_t ny = y + dy;
                    const bool d = nx >= 0 && ny >= 0 && nx < w && ny < h &&
                                   in[static_cast<std::size_t>(ny * w + nx)] == Pixel::Dry;
                    all_dry = all_dry && d;
                    any_dry = any_dry || d;
                }
            }
            dst[static_cast<std::size_t>(y * w + x)] =
                (Erode ? all_dry : any_dry) ? Pixel::Dry : Pixel::Wet;
        }
    }
    return out;
}

} // namespace

BinaryMask erode(const BinaryMask& mask, StructuringElement) { return morph<true>(mask); }

BinaryMask dilate(const BinaryMask& mask, StructuringElement) { return morph<false>(mask); }

BinaryMask transpose(const BinaryMask& mask) {
    BinaryMask out(mask.height(), mask.width());
    out.set_resolution(mask.resolution());
    for (std::size_t y = 0; y < mask.height(); ++y) {
        for (std::size_t x = 0; x < mask.width(); ++x) {
            out.set(y, x, mask.at(x, y));
        }
    }
    return out;
}

BinaryMask rotate90(const BinaryMask& mask) {
    BinaryMask out(mask.height(), mask.width());
    out.set_resolution(mask.resolution());
    const std::size_t h = mask.height();
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < mask.width(); ++x) {
            out.set(h - 1 - y, x, mask.at(x, y));
        }
    }
    return out;
}

} // namespace bubbleuq
