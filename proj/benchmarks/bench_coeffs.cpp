#include <benchmark/benchmark.h>

#include "vdm/coeffs.hpp"

static void BM_CoeffExactTableN7(benchmark::State& state) {
    auto parts = vdm::enumerate_partitions(7);
    for (auto _ : state) {
        double acc = 0;
        for (const auto& p : parts) acc += vdm::coeff_uniform_exact(p)->value;
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(BM_CoeffExactTableN7);

static void BM_CoeffMc(benchmark::State& state) {
    vdm::SetPartition rho = vdm::SetPartition::from_text("1,3,5/2,4,6");
    vdm::McOptions opt;
    opt.samples = state.range(0);
    opt.seed = 7;
    for (auto _ : state) {
        benchmark::DoNotOptimize(vdm::coeff_uniform_mc(rho, opt));
    }
    state.SetItemsProcessed(state.iterations() * opt.samples);
}
BENCHMARK(BM_CoeffMc)->Arg(100000);

static void BM_CoeffFiniteN(benchmark::State& state) {
    vdm::SetPartition rho = vdm::SetPartition::from_text("1,3/2,4");
    for (auto _ : state) {
        benchmark::DoNotOptimize(vdm::coeff_uniform_finite_N(rho, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_CoeffFiniteN)->Arg(64);
