#include <benchmark/benchmark.h>

#include "cmst/generators.hpp"
#include "cmst/mst_protocol.hpp"
#include "cmst/oracle.hpp"

using namespace cmst;

namespace {

WeightedGraph gnm(std::int64_t n, std::uint64_t seed) {
    GraphFamily f;
    f.family = Family::GnmConnected;
    f.n = n;
    f.m = 4 * n;
    f.seed = seed;
    return generate(f);
}

void BM_kruskal(benchmark::State& state) {
    auto g = gnm(state.range(0), 1);
    for (auto _ : state) benchmark::DoNotOptimize(kruskal_mst(g));
}
BENCHMARK(BM_kruskal)->Arg(64)->Arg(256)->Arg(1024);

void BM_protocol(benchmark::State& state) {
    auto g = gnm(state.range(0), 1);
    for (auto _ : state) {
        MstRunOptions opts;
        benchmark::DoNotOptimize(run_mst(g, opts));
    }
    state.counters["rounds"] = static_cast<double>(run_mst(g, {}).metrics.rounds);
}
BENCHMARK(BM_protocol)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_protocol_bandwidth(benchmark::State& state) {
    auto g = gnm(256, 7);
    MstRunOptions opts;
    opts.bandwidth = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run_mst(g, opts));
}
BENCHMARK(BM_protocol_bandwidth)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_generate(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(gnm(state.range(0), 3));
}
BENCHMARK(BM_generate)->Arg(256)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
