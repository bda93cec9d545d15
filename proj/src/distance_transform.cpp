#include "bubbleuq/distance_transform.hpp"

#include <algorithm>
#include <cstddef>

namespace bubbleuq {

namespace {

constexpr double kInf = DistanceGrid::infinity;

// 1-D squared distance transform of a sampled function f (values 0, finite,
// or +inf). Sites with f = +inf never contribute to the envelope.
void envelope_1d(const double* f, std::size_t n, double* out, std::vector<std::ptrdiff_t>& v,
                 std::vector<double>& z) {
    v.resize(n);
    z.resize(n + 1);
    std::ptrdiff_t k = -1;
    for (std::size_t q = 0; q < n; ++q) {
        if (f[q] == kInf) continue;
        const double fq = f[q] + static_cast<double>(q) * static_cast<double>(q);
        double s = 0.0;
        while (k >= 0) {
            const auto p = static_cast<double>(v[static_cast<std::size_t>(k)]);
            const double fp = f[v[static_cast<std::size_t>(k)]] + p * p;
            s = (fq - fp) / (2.0 * (static_cast<double>(q) - p));
            if (s > z[static_cast<std::size_t>(k)]) break;
            --k;
        }
        ++k;
        v[static_cast<std::size_t>(k)] = static_cast<std::ptrdiff_t>(q);
        z[static_cast<std::size_t>(k)] = (k == 0) ? -kInf : s;
        z[static_cast<std::size_t>(k) + 1] = kInf;
    }
    if (k < 0) {
        for (std::size_t q = 0; q < n; ++q) out[q] = kInf;
        return;
    }
    std::size_t j = 0;
    for (std::size_t q = 0; q < n; ++q) {
        while (z[j + 1] < static_cast<double>(q)) ++j;
        const double d = static_cast<double>(q) - static_cast<double>(v[j]);
        out[q] = d * d + f[v[j]];
    }
}

} // namespace

DistanceGrid distance_transform(const BinaryMask& mask) {
    const std::size_t w = mask.width();
    const std::size_t h = mask.height();
    std::vector<double> grid(w * h);
    const bool parallel = mask.size() >= (1u << 14);

    // Columns: exact 1-D distance along y.
#pragma omp parallel if (parallel)
    {
        std::vector<double> col(h);
        std::vector<double> res(h);
        std::vector<std::ptrdiff_t> v;
        std::vector<double> z;
#pragma omp for schedule(static)
        for (std::ptrdiff_t xi = 0; xi < static_cast<std::ptrdiff_t>(w); ++xi) {
            const auto x = static_cast<std::size_t>(xi);
            for (std::size_t y = 0; y < h; ++y) col[y] = mask.dry(x, y) ? 0.0 : kInf;
            envelope_1d(col.data(), h, res.data(), v, z);
            for (std::size_t y = 0; y < h; ++y) grid[y * w + x] = res[y];
        }
    }

    // Rows: combine column results into the 2-D squared distance.
#pragma omp parallel if (parallel)
    {
        std::vector<double> row(w);
        std::vector<std::ptrdiff_t> v;
        std::vector<double> z;
#pragma omp for schedule(static)
        for (std::ptrdiff_t yi = 0; yi < static_cast<std::ptrdiff_t>(h); ++yi) {
            double* r = grid.data() + static_cast<std::size_t>(yi) * w;
            envelope_1d(r, w, row.data(), v, z);
            std::copy(row.begin(), row.end(), r);
        }
    }
    return DistanceGrid(w, h, std::move(grid));
}

} // namespace bubbleuq
