#pragma once

#include "bubbleuq/mask.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace bubbleuq {

/// Square simulation domain of side `domain_length` (um) rasterised with
/// square cells of side `cell_size` (um). The raster has round(L/N) cells per
/// axis; when L/N is not an integer the raster covers slightly more or less
/// than the domain.
class GridSpec {
public:
    GridSpec(double domain_length, double cell_size);

    double domain_length() const noexcept { return length_; }
    double cell_size() const noexcept { return cell_; }
    std::size_t cells() const noexcept { return cells_; }

private:
    double length_;
    double cell_;
    std::size_t cells_;
};

enum class BoundaryMode { None, Erode, Dilate };

BoundaryMode parse_boundary_mode(std::string_view text);
std::string_view to_string(BoundaryMode mode);

struct SimConfig {
    double domain_length = 1000.0;
    std::vector<double> cell_sizes = {5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
    std::vector<double> radii = default_radii();
    std::uint64_t iterations = 20000;
    std::uint64_t seed = 1;
    BoundaryMode boundary_mode = BoundaryMode::None;

    static std::vector<double> default_radii();
};

/// Throws ArgumentError naming the first violated constraint.
void validate(const SimConfig& config);

struct CellResult {
    double cell_size = 0;       // N, um
    double radius = 0;          // R, um
    std::uint64_t iterations = 0;
    double mean_area = 0;       // um^2
    double mean_perimeter = 0;  // um
    double pre_area = 0;        // percent
    double pre_perimeter = 0;   // percent
    double me_area = 0;         // um^2
    double me_perimeter = 0;    // um

    friend bool operator==(const CellResult&, const CellResult&) = default;
};

/// Dense (N x R) grid of cell results for one boundary mode, axes ascending.
struct ErrorMatrix {
    std::vector<double> cell_sizes;
    std::vector<double> radii;
    BoundaryMode boundary_mode = BoundaryMode::None;
    std::vector<CellResult> cells;  // row-major: index = iN * radii.size() + iR

    const CellResult& at(std::size_t n_index, std::size_t r_index) const {
        return cells.at(n_index * radii.size() + r_index);
    }
    std::optional<std::size_t> cell_size_index(double n) const;

    friend bool operator==(const ErrorMatrix&, const ErrorMatrix&) = default;
};

/// PRE/ME of a discretised measurement against its theoretical value.
double percent_relative_error(double theoretical, double measured);
double mean_error(double theoretical, double measured);

/// Cells whose centre lies strictly closer than R to (cx, cy) are DRY. The
/// circle must lie inside the domain. The mask carries resolution N.
BinaryMask rasterize_circle(const GridSpec& grid, double cx, double cy, double radius);

struct DiscreteMeasure {
    double area = 0;       // DRY count * N^2
    double perimeter = 0;  // outer boundary ring * N
};

DiscreteMeasure measure_discrete(const BinaryMask& mask, double cell_size);

/// Key for the random stream of the (N, R) cell. Depends on values, not on
/// their positions in the axis lists.
std::uint64_t substream_seed(std::uint64_t seed, double cell_size, double radius);

/// Monte Carlo estimate for one (N, R): each draw places the centre
/// uniformly in [R, L-R]^2, rasterises, applies the boundary mode and
/// measures. Deterministic in (stream_seed, grid, R, iterations, mode).
CellResult simulate_cell(const GridSpec& grid, double radius, std::uint64_t iterations,
                         std::uint64_t stream_seed, BoundaryMode mode);

/// Same draws as simulate_cell but through the full-raster public
/// operations. Slow; kept as the reference the fast kernel is tested against.
CellResult simulate_cell_reference(const GridSpec& grid, double radius, std::uint64_t iterations,
                                   std::uint64_t stream_seed, BoundaryMode mode);

/// Parallel sweep over all (N, R) cells. `threads` <= 0 uses the OpenMP
/// default. Output is independent of the thread count.
ErrorMatrix run_sweep(const SimConfig& config, int threads = 0);
ErrorMatrix run_sweep_serial(const SimConfig& config);

struct TracePoint {
    std::uint64_t iterations = 0;
    double mean_area = 0;
    double mean_perimeter = 0;
    double pre_area = 0;
    double pre_perimeter = 0;
};

/// Running-mean PRE at each milestone of one stream keyed by
/// substream_seed(seed, N, R). The entry at milestone m equals
/// simulate_cell with m iterations on that stream.
std::vector<TracePoint> convergence_trace(const GridSpec& grid, double radius,
                                          const std::vector<std::uint64_t>& milestones,
                                          std::uint64_t seed, BoundaryMode mode);

namespace detail {

/// Pixel counts of one draw after the boundary mode.
struct DrawCounts {
    std::uint64_t dry = 0;
    std::uint64_t ring = 0;
};

/// Reusable scratch so the sweep does not allocate per draw.
class DrawKernel {
public:
    explicit DrawKernel(const GridSpec& grid) : grid_(grid) {}
    DrawCounts measure(double cx, double cy, double radius, BoundaryMode mode);

private:
    GridSpec grid_;
    std::vector<std::uint8_t> a_;
    std::vector<std::uint8_t> b_;
};

} // namespace detail

} // namespace bubbleuq
