#include "bubbleuq/uq_sim.hpp"

#include "bubbleuq/bubbles.hpp"
#include "bubbleuq/error.hpp"
#include "bubbleuq/numfmt.hpp"
#include "bubbleuq/rng.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

namespace bubbleuq {

GridSpec::GridSpec(double domain_length, double cell_size) : length_(domain_length), cell_(cell_size) {
    if (!(std::isfinite(domain_length) && domain_length > 0.0)) {
        throw ArgumentError("domain length must be > 0");
    }
    if (!(std::isfinite(cell_size) && cell_size > 0.0)) {
        throw ArgumentError("cell size must be > 0");
    }
    const double n = std::round(domain_length / cell_size);
    if (n < 4.0) {
        throw ArgumentError("cell size " + format_double(cell_size) + " gives fewer than 4 cells across a " +
                            format_double(domain_length) + " um domain");
    }
    cells_ = static_cast<std::size_t>(n);
}

BoundaryMode parse_boundary_mode(std::string_view text) {
    if (text == "none") return BoundaryMode::None;
    if (text == "erode") return BoundaryMode::Erode;
    if (text == "dilate") return BoundaryMode::Dilate;
    throw ArgumentError("boundary mode must be none, erode or dilate; got '" + std::string(text) + "'");
}

std::string_view to_string(BoundaryMode mode) {
    switch (mode) {
    case BoundaryMode::None: return "none";
    case BoundaryMode::Erode: return "erode";
    case BoundaryMode::Dilate: return "dilate";
    }
    return "?";
}

std::vector<double> SimConfig::default_radii() {
    std::vector<double> r;
    for (int i = 1; i <= 40; ++i) r.push_back(5.0 * i);
    return r;
}

namespace {

void validate_radius(double domain_length, double radius) {
    if (!(std::isfinite(radius) && radius > 0.0)) {
        throw ArgumentError("radius must be > 0, got " + format_double(radius));
    }
    if (!(2.0 * radius < domain_length)) {
        throw ArgumentError("radius " + format_double(radius) + " does not fit: need 2R < L = " +
                            format_double(domain_length));
    }
}

void validate_axis(std::vector<double> axis, const char* name) {
    if (axis.empty()) throw ArgumentError(std::string(name) + " list is empty");
    std::sort(axis.begin(), axis.end());
    if (std::adjacent_find(axis.begin(), axis.end()) != axis.end()) {
        throw ArgumentError(std::string(name) + " list contains duplicates");
    }
}

double pixel_centre(std::size_t i, double cell) { return (static_cast<double>(i) + 0.5) * cell; }

CellResult finish_cell(const GridSpec& grid, double radius, std::uint64_t iterations,
                       std::uint64_t dry_sum, std::uint64_t ring_sum) {
    const double n = grid.cell_size();
    CellResult c;
    c.cell_size = n;
    c.radius = radius;
    c.iterations = iterations;
    const auto iters = static_cast<double>(iterations);
    c.mean_area = static_cast<double>(dry_sum) * n * n / iters;
    c.mean_perimeter = static_cast<double>(ring_sum) * n / iters;
    const double area_theo = std::numbers::pi * radius * radius;
    const double perim_theo = 2.0 * std::numbers::pi * radius;
    c.pre_area = percent_relative_error(area_theo, c.mean_area);
    c.pre_perimeter = percent_relative_error(perim_theo, c.mean_perimeter);
    c.me_area = mean_error(area_theo, c.mean_area);
    c.me_perimeter = mean_error(perim_theo, c.mean_perimeter);
    return c;
}

struct CentreSampler {
    UniformStream stream;
    double lo;
    double hi;

    CentreSampler(std::uint64_t key, const GridSpec& grid, double radius)
        : stream(key), lo(radius), hi(grid.domain_length() - radius) {}

    std::pair<double, double> next() {
        const double x = stream.next(lo, hi);
        const double y = stream.next(lo, hi);
        return {x, y};
    }
};

} // namespace

void validate(const SimConfig& config) {
    if (!(std::isfinite(config.domain_length) && config.domain_length > 0.0)) {
        throw ArgumentError("domain length must be > 0");
    }
    if (config.iterations < 1) throw ArgumentError("iterations must be >= 1");
    validate_axis(config.cell_sizes, "cell size");
    validate_axis(config.radii, "radius");
    for (double n : config.cell_sizes) GridSpec(config.domain_length, n);
    for (double r : config.radii) validate_radius(config.domain_length, r);
}

std::optional<std::size_t> ErrorMatrix::cell_size_index(double n) const {
    const auto it = std::find(cell_sizes.begin(), cell_sizes.end(), n);
    if (it == cell_sizes.end()) return std::nullopt;
    return static_cast<std::size_t>(it - cell_sizes.begin());
}

double percent_relative_error(double theoretical, double measured) {
    return (theoretical - measured) / theoretical * 100.0;
}

double mean_error(double theoretical, double measured) { return theoretical - measured; }

BinaryMask rasterize_circle(const GridSpec& grid, double cx, double cy, double radius) {
    const double len = grid.domain_length();
    if (!(radius > 0.0) || !(radius <= std::min({cx, cy, len - cx, len - cy}))) {
        throw ArgumentError("circle of radius " + format_double(radius) + " at (" + format_double(cx) +
                            ", " + format_double(cy) + ") is not inside the domain");
    }
    const std::size_t n = grid.cells();
    const double cell = grid.cell_size();
    const double r2 = radius * radius;
    BinaryMask mask(n, n);
    mask.set_resolution(Resolution(cell));
    for (std::size_t j = 0; j < n; ++j) {
        const double dy = pixel_centre(j, cell) - cy;
        for (std::size_t i = 0; i < n; ++i) {
            const double dx = pixel_centre(i, cell) - cx;
            if (dx * dx + dy * dy < r2) mask.set(i, j, Pixel::Dry);
        }
    }
    return mask;
}

DiscreteMeasure measure_discrete(const BinaryMask& mask, double cell_size) {
    return {static_cast<double>(mask.dry_count()) * cell_size * cell_size,
            static_cast<double>(outer_boundary_pixels(mask)) * cell_size};
}

std::uint64_t substream_seed(std::uint64_t seed, double cell_size, double radius) {
    std::uint64_t k = splitmix64(seed);
    k = splitmix64(k ^ std::bit_cast<std::uint64_t>(cell_size));
    return splitmix64(k ^ std::bit_cast<std::uint64_t>(radius));
}

namespace detail {

namespace {

// 3x3 morphology over a w x h window; outside the window reads as WET.
template <bool Erode>
void morph_window(const std::uint8_t* in, std::uint8_t* out, std::ptrdiff_t w, std::ptrdiff_t h) {
    for (std::ptrdiff_t y = 0; y < h; ++y) {
        for (std::ptrdiff_t x = 0; x < w; ++x) {
            bool all = true;
            bool any = false;
            for (std::ptrdiff_t dy = -1; dy <= 1; ++dy) {
                const std::ptrdiff_t ny = y + dy;
                for (std::ptrdiff_t dx = -1; dx <= 1; ++dx) {
                    const std::ptrdiff_t nx = x + dx;
                    const bool d = nx >= 0 && ny >= 0 && nx < w && ny < h && in[ny * w + nx];
                    all = all && d;
                    any = any || d;
                }
            }
            out[y * w + x] = (Erode ? all : any) ? 1 : 0;
        }
    }
}

} // namespace

DrawCounts DrawKernel::measure(double cx, double cy, double radius, BoundaryMode mode) {
    const double cell = grid_.cell_size();
    const auto last = static_cast<long long>(grid_.cells()) - 1;
    // Candidate span, widened so rounding never drops a pixel; then padded by
    // 2 so dilation plus the outer ring never reach a non-frame window edge.
    const auto span = [&](double c, long long& lo, long long& hi) {
        lo = std::max(0LL, static_cast<long long>(std::floor((c - radius) / cell - 0.5)) - 3);
        hi = std::min(last, static_cast<long long>(std::ceil((c + radius) / cell - 0.5)) + 3);
    };
    long long x0, x1, y0, y1;
    span(cx, x0, x1);
    span(cy, y0, y1);
    if (x0 > x1 || y0 > y1) return {};
    const auto w = static_cast<std::ptrdiff_t>(x1 - x0 + 1);
    const auto h = static_cast<std::ptrdiff_t>(y1 - y0 + 1);
    a_.assign(static_cast<std::size_t>(w * h), 0);

    const double r2 = radius * radius;
    for (std::ptrdiff_t y = 0; y < h; ++y) {
        const double dy = pixel_centre(static_cast<std::size_t>(y0 + y), cell) - cy;
        for (std::ptrdiff_t x = 0; x < w; ++x) {
            const double dx = pixel_centre(static_cast<std::size_t>(x0 + x), cell) - cx;
            a_[static_cast<std::size_t>(y * w + x)] = (dx * dx + dy * dy < r2) ? 1 : 0;
        }
    }

    const std::uint8_t* m = a_.data();
    if (mode != BoundaryMode::None) {
        b_.resize(a_.size());
        if (mode == BoundaryMode::Erode) {
            morph_window<true>(a_.data(), b_.data(), w, h);
        } else {
            morph_window<false>(a_.data(), b_.data(), w, h);
        }
        m = b_.data();
    }

    // DRY pixels only touch a window edge where it coincides with the frame
    // edge, so every DRY pixel on a window edge exposes a virtual ring cell.
    DrawCounts counts;
    for (std::ptrdiff_t y = 0; y < h; ++y) {
        for (std::ptrdiff_t x = 0; x < w; ++x) {
            if (m[y * w + x]) {
                ++counts.dry;
                counts.ring += static_cast<unsigned>(x == 0) + static_cast<unsigned>(x + 1 == w) +
                               static_cast<unsigned>(y == 0) + static_cast<unsigned>(y + 1 == h);
            } else if ((x > 0 && m[y * w + x - 1]) || (x + 1 < w && m[y * w + x + 1]) ||
                       (y > 0 && m[(y - 1) * w + x]) || (y + 1 < h && m[(y + 1) * w + x])) {
                ++counts.ring;
            }
        }
    }
    return counts;
}

} // namespace detail

CellResult simulate_cell(const GridSpec& grid, double radius, std::uint64_t iterations,
                         std::uint64_t stream_seed, BoundaryMode mode) {
    validate_radius(grid.domain_length(), radius);
    if (iterations < 1) throw ArgumentError("iterations must be >= 1");
    CentreSampler sampler(stream_seed, grid, radius);
    detail::DrawKernel kernel(grid);
    std::uint64_t dry = 0;
    std::uint64_t ring = 0;
    for (std::uint64_t k = 0; k < iterations; ++k) {
        const auto [x, y] = sampler.next();
        const detail::DrawCounts c = kernel.measure(x, y, radius, mode);
        dry += c.dry;
        ring += c.ring;
    }
    return finish_cell(grid, radius, iterations, dry, ring);
}

CellResult simulate_cell_reference(const GridSpec& grid, double radius, std::uint64_t iterations,
                                   std::uint64_t stream_seed, BoundaryMode mode) {
    validate_radius(grid.domain_length(), radius);
    if (iterations < 1) throw ArgumentError("iterations must be >= 1");
    CentreSampler sampler(stream_seed, grid, radius);
    std::uint64_t dry = 0;
    std::uint64_t ring = 0;
    for (std::uint64_t k = 0; k < iterations; ++k) {
        const auto [x, y] = sampler.next();
        BinaryMask mask = rasterize_circle(grid, x, y, radius);
        if (mode == BoundaryMode::Erode) mask = erode(mask);
        if (mode == BoundaryMode::Dilate) mask = dilate(mask);
        dry += mask.dry_count();
        ring += outer_boundary_pixels(mask);
    }
    return finish_cell(grid, radius, iterations, dry, ring);
}

namespace {

ErrorMatrix empty_matrix(const SimConfig& config) {
    validate(config);
    ErrorMatrix m;
    m.cell_sizes = config.cell_sizes;
    m.radii = config.radii;
    std::sort(m.cell_sizes.begin(), m.cell_sizes.end());
    std::sort(m.radii.begin(), m.radii.end());
    m.boundary_mode = config.boundary_mode;
    m.cells.resize(m.cell_sizes.size() * m.radii.size());
    return m;
}

CellResult sweep_cell(const SimConfig& config, const ErrorMatrix& m, std::size_t flat) {
    const double n = m.cell_sizes[flat / m.radii.size()];
    const double r = m.radii[flat % m.radii.size()];
    return simulate_cell(GridSpec(config.domain_length, n), r, config.iterations,
                         substream_seed(config.seed, n, r), config.boundary_mode);
}

} // namespace

ErrorMatrix run_sweep(const SimConfig& config, int threads) {
    ErrorMatrix m = empty_matrix(config);
    const auto total = static_cast<std::ptrdiff_t>(m.cells.size());
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads)
    for (std::ptrdiff_t i = 0; i < total; ++i) {
        m.cells[static_cast<std::size_t>(i)] = sweep_cell(config, m, static_cast<std::size_t>(i));
    }
    return m;
}

ErrorMatrix run_sweep_serial(const SimConfig& config) {
    ErrorMatrix m = empty_matrix(config);
    for (std::size_t i = 0; i < m.cells.size(); ++i) m.cells[i] = sweep_cell(config, m, i);
    return m;
}

std::vector<TracePoint> convergence_trace(const GridSpec& grid, double radius,
                                          const std::vector<std::uint64_t>& milestones,
                                          std::uint64_t seed, BoundaryMode mode) {
    validate_radius(grid.domain_length(), radius);
    if (milestones.empty()) throw ArgumentError("convergence trace needs at least one milestone");
    for (std::size_t i = 0; i < milestones.size(); ++i) {
        if (milestones[i] < 1 || (i > 0 && milestones[i] <= milestones[i - 1])) {
            throw ArgumentError("milestones must be >= 1 and strictly ascending");
        }
    }
    CentreSampler sampler(substream_seed(seed, grid.cell_size(), radius), grid, radius);
    detail::DrawKernel kernel(grid);
    std::vector<TracePoint> trace;
    std::uint64_t dry = 0;
    std::uint64_t ring = 0;
    std::uint64_t done = 0;
    for (std::uint64_t target : milestones) {
        for (; done < target; ++done) {
            const auto [x, y] = sampler.next();
            const detail::DrawCounts c = kernel.measure(x, y, radius, mode);
            dry += c.dry;
            ring += c.ring;
        }
        const CellResult cell = finish_cell(grid, radius, target, dry, ring);
        trace.push_back({target, cell.mean_area, cell.mean_perimeter, cell.pre_area, cell.pre_perimeter});
    }
    return trace;
}

} // namespace bubbleuq
