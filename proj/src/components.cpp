#include "bubbleuq/components.hpp"

#include "bubbleuq/error.hpp"

#include <string>

namespace bubbleuq {

Connectivity parse_connectivity(int value) {
    if (value == 4) return Connectivity::Four;
    if (value == 8) return Connectivity::Eight;
    throw ArgumentError("connectivity must be 4 or 8, got " + std::to_string(value));
}

LabelGrid label_components(const BinaryMask& mask, Connectivity connectivity) {
    const auto w = static_cast<std::ptrdiff_t>(mask.width());
    const auto h = static_cast<std::ptrdiff_t>(mask.height());
    LabelGrid out;
    out.width = mask.width();
    out.height = mask.height();
    out.labels.assign(mask.size(), 0);

    static constexpr int kOffsets[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1},
                                           {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
    const int n_offsets = connectivity == Connectivity::Eight ? 8 : 4;

    std::vector<std::size_t> stack;
    for (std::ptrdiff_t y = 0; y < h; ++y) {
        for (std::ptrdiff_t x = 0; x < w; ++x) {
            const auto idx = static_cast<std::size_t>(y * w + x);
            if (mask.pixels()[idx] != Pixel::Dry || out.labels[idx] != 0) continue;
            const std::uint32_t label = ++out.count;
            out.labels[idx] = label;
            stack.push_back(idx);
            while (!stack.empty()) {
                const std::size_t cur = stack.back();
                stack.pop_back();
                const auto cx = static_cast<std::ptrdiff_t>(cur) % w;
                const auto cy = static_cast<std::ptrdiff_t>(cur) / w;
                for (int k = 0; k < n_offsets; ++k) {
                    const std::ptrdiff_t nx = cx + kOffsets[k][0];
                    const std::ptrdiff_t ny = cy + kOffsets[k][1];
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                    const auto nidx = static_cast<std::size_t>(ny * w + nx);
                    if (mask.pixels()[nidx] == Pixel::Dry && out.labels[nidx] == 0) {
                        out.labels[nidx] = label;
                        stack.push_back(nidx);
                    }
                }
            }
        }
    }
    return out;
}

} // namespace bubbleuq
