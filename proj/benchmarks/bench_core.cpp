#include <benchmark/benchmark.h>

#include <random>

#include "corrfilter/correlation.hpp"
#include "corrfilter/dbht.hpp"
#include "corrfilter/filtergraph.hpp"
#include "corrfilter/kmedoids.hpp"
#include "corrfilter/linkage.hpp"
#include "corrfilter/synth.hpp"

using namespace corrfilter;

namespace {

ReturnsPanel panel(std::size_t n, std::size_t t) {
    SynthSpec spec{.n = n, .t = t, .n_sectors = 19};
    spec.seed = 1;
    return generate(spec).first;
}

DistanceMatrix distances(std::size_t n) {
    return to_distance(pearson(panel(n, 1000), WeightScheme::exponential_for_window(1000)));
}

void BM_Pearson(benchmark::State& state) {
    const auto p = panel(static_cast<std::size_t>(state.range(0)), 1000);
    const auto w = WeightScheme::exponential_for_window(1000);
    for (auto _ : state) benchmark::DoNotOptimize(pearson(p, w));
}
BENCHMARK(BM_Pearson)->Arg(100)->Arg(342)->Unit(benchmark::kMillisecond);

void BM_Mst(benchmark::State& state) {
    const auto d = distances(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(mst(d));
}
BENCHMARK(BM_Mst)->Arg(100)->Arg(342)->Unit(benchmark::kMillisecond);

void BM_Pmfg(benchmark::State& state) {
    const auto d = distances(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(pmfg(d));
}
BENCHMARK(BM_Pmfg)->Arg(50)->Arg(150)->Arg(342)->Unit(benchmark::kMillisecond);

void BM_Linkage(benchmark::State& state) {
    const auto d = distances(342);
    const auto rule = static_cast<LinkageRule>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(linkage(d, rule));
}
BENCHMARK(BM_Linkage)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_KMedoids(benchmark::State& state) {
    const auto d = distances(342);
    PamConfig cfg;
    cfg.n_clusters = static_cast<std::size_t>(state.range(0));
    cfg.restarts = 1;
    for (auto _ : state) benchmark::DoNotOptimize(kmedoids(d, cfg));
}
BENCHMARK(BM_KMedoids)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_Dbht(benchmark::State& state) {
    const auto p = panel(static_cast<std::size_t>(state.range(0)), 1000);
    const auto c = pearson(p, WeightScheme::uniform());
    const auto d = to_distance(c);
    for (auto _ : state) benchmark::DoNotOptimize(dbht(d, c));
}
BENCHMARK(BM_Dbht)->Arg(100)->Arg(342)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
