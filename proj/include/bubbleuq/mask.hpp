#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace bubbleuq {

/// Pixel phase. DRY is vapor (coded 1), WET is liquid (coded 0).
enum class Pixel : std::uint8_t { Wet = 0, Dry = 1 };

/// Physical length of one pixel edge, in micrometres. Always > 0.
class Resolution {
public:
    explicit Resolution(double um_per_px);
    double um_per_px() const noexcept { return value_; }
    friend bool operator==(const Resolution&, const Resolution&) = default;

private:
    double value_;
};

/// Row-major binary dry/wet grid. Width and height are at least 1.
class BinaryMask {
public:
    BinaryMask(std::size_t width, std::size_t height, Pixel fill = Pixel::Wet);
    BinaryMask(std::size_t width, std::size_t height, std::vector<Pixel> pixels);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return pixels_.size(); }

    Pixel at(std::size_t x, std::size_t y) const noexcept { return pixels_[y * width_ + x]; }
    void set(std::size_t x, std::size_t y, Pixel p) noexcept { pixels_[y * width_ + x] = p; }
    bool dry(std::size_t x, std::size_t y) const noexcept { return at(x, y) == Pixel::Dry; }

    std::span<const Pixel> pixels() const noexcept { return pixels_; }
    std::span<Pixel> pixels() noexcept { return pixels_; }

    const std::optional<Resolution>& resolution() const noexcept { return resolution_; }
    void set_resolution(std::optional<Resolution> r) noexcept { resolution_ = r; }

    std::size_t dry_count() const noexcept;

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<Pixel> pixels_;
    std::optional<Resolution> resolution_;
};

/// The fixed 3x3 full square: one-pixel reach in all 8 directions.
struct StructuringElement {
    static constexpr int radius = 1;
};

BinaryMask invert(const BinaryMask& mask);

// Out-of-bounds neighbours are treated as WET for both operations.
BinaryMask erode(const BinaryMask& mask, StructuringElement se = {});
BinaryMask dilate(const BinaryMask& mask, StructuringElement se = {});

BinaryMask transpose(const BinaryMask& mask);
/// Quarter turn clockwise.
BinaryMask rotate90(const BinaryMask& mask);

} // namespace bubbleuq
