// Serial reference sweep against the OpenMP sweep, plus the mask kernels.

#include "bubbleuq/distance_transform.hpp"
#include "bubbleuq/mask.hpp"
#include "bubbleuq/uq_sim.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace bubbleuq;

namespace {

SimConfig bench_config() {
    SimConfig c;
    c.cell_sizes = {5, 12.6, 25, 50};
    c.iterations = 200;
    return c;
}

BinaryMask noisy_mask(std::size_t side) {
    BinaryMask m(side, side);
    std::mt19937_64 rng(3);
    std::bernoulli_distribution d(0.3);
    for (auto& p : m.pixels()) p = d(rng) ? Pixel::Dry : Pixel::Wet;
    return m;
}

} // namespace

static void BM_SweepSerial(benchmark::State& state) {
    const SimConfig c = bench_config();
    for (auto _ : state) benchmark::DoNotOptimize(run_sweep_serial(c));
}
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);

static void BM_SweepOpenMP(benchmark::State& state) {
    const SimConfig c = bench_config();
    const int threads = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run_sweep(c, threads));
}
BENCHMARK(BM_SweepOpenMP)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

static void BM_DistanceTransform(benchmark::State& state) {
    const BinaryMask m = noisy_mask(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(distance_transform(m));
}
BENCHMARK(BM_DistanceTransform)->Arg(256)->Arg(1024);

static void BM_Erode(benchmark::State& state) {
    const BinaryMask m = noisy_mask(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(erode(m));
}
BENCHMARK(BM_Erode)->Arg(256)->Arg(1024);

BENCHMARK_MAIN();
