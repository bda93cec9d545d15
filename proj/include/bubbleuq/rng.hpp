#pragma once

#include <bit>
#include <cstdint>
#include <random>

namespace bubbleuq {

/// SplitMix64 finaliser; used to derive independent stream keys.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// mt19937_64 with a portable [0, 1) conversion (top 53 bits), so streams are
/// bit-identical across standard libraries.
class UniformStream {
public:
    explicit UniformStream(std::uint64_t key) : engine_(key) {}

    double next() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double next(double lo, double hi) noexcept { return lo + (hi - lo) * next(); }

private:
    std::mt19937_64 engine_;
};

} // namespace bubbleuq
