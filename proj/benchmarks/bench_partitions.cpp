#include <benchmark/benchmark.h>

#include "vdm/partition.hpp"

static void BM_EnumeratePartitions(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        long long count = 0;
        vdm::for_each_partition(n, [&](const vdm::SetPartition& p) {
            count += p.block_count();
            return true;
        });
        benchmark::DoNotOptimize(count);
    }
}
BENCHMARK(BM_EnumeratePartitions)->Arg(8)->Arg(10);

static void BM_NoncrossingScan(benchmark::State& state) {
    auto parts = vdm::enumerate_partitions(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        int nc = 0;
        for (const auto& p : parts) nc += vdm::is_noncrossing(p) ? 1 : 0;
        benchmark::DoNotOptimize(nc);
    }
}
BENCHMARK(BM_NoncrossingScan)->Arg(8);

static void BM_KrewerasComplement(benchmark::State& state) {
    auto parts = vdm::enumerate_partitions(8);
    for (auto _ : state) {
        for (const auto& p : parts) {
            if (vdm::is_noncrossing(p)) benchmark::DoNotOptimize(vdm::kreweras_complement(p));
        }
    }
}
BENCHMARK(BM_KrewerasComplement);
