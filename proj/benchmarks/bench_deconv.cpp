#include <benchmark/benchmark.h>

#include "vdm/deconv.hpp"

static void BM_VandermondeDeconvolve(benchmark::State& state) {
    vdm::CoeffProvider provider;
    vdm::MomentVector m;
    m.values = {1.0, 2.0, 5.0, 44.0 / 3.0, 146.0 / 3.0, 3571.0 / 20.0, 2141.0 / 3.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(vdm::vandermonde_deconvolve(m, provider));
    }
}
BENCHMARK(BM_VandermondeDeconvolve);

static void BM_PredictWExact(benchmark::State& state) {
    vdm::SystemDims dims{100, 36, 10};
    std::array<double, 3> P = {1.0, 7.0 / 6.0, 1.5};
    for (auto _ : state) {
        benchmark::DoNotOptimize(vdm::predict_W_moments_exact_uniform(P, 0.31, dims));
    }
}
BENCHMARK(BM_PredictWExact);

BENCHMARK_MAIN();
