#include <benchmark/benchmark.h>

#include "vdm/randmat.hpp"

static void BM_GramTraceMoments(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    vdm::Rng rng(3);
    vdm::ComplexMatrix v = vdm::sample_vandermonde(dim, dim, vdm::PhaseDistribution::uniform(), rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(vdm::gram_trace_moments(v, {}, 4));
    }
}
BENCHMARK(BM_GramTraceMoments)->Arg(50)->Arg(64);

static void BM_SampleVandermonde(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    vdm::Rng rng(5);
    auto uniform = vdm::PhaseDistribution::uniform();
    for (auto _ : state) {
        benchmark::DoNotOptimize(vdm::sample_vandermonde(dim, dim, uniform, rng));
    }
}
BENCHMARK(BM_SampleVandermonde)->Arg(64);

static void BM_JacobiEigenvalues(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    vdm::Rng rng(7);
    vdm::ComplexMatrix gram = vdm::sample_complex_gaussian(dim, dim, rng).gram();
    for (auto _ : state) {
        vdm::ComplexMatrix copy = gram;
        benchmark::DoNotOptimize(vdm::hermitian_eigenvalues(copy));
    }
}
BENCHMARK(BM_JacobiEigenvalues)->Arg(64)->Arg(128);
