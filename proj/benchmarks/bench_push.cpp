#include <benchmark/benchmark.h>

#include <cstdint>
#include <numeric>
#include <vector>

#include "pushsim/config_model.hpp"
#include "pushsim/graph.hpp"
#include "pushsim/push_engine.hpp"
#include "pushsim/rng.hpp"
#include "pushsim/spectral.hpp"
#include "pushsim/theory.hpp"

using namespace pushsim;

namespace {

void bm_static_push_complete(benchmark::State& state) {
    const Graph g = complete_graph(std::uint32_t(state.range(0)));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_static(g, 0, seed++));
    }
}
BENCHMARK(bm_static_push_complete)->Arg(1000);

void bm_static_push_regular(benchmark::State& state) {
    Rng rng(3);
    const Graph g = sample_simple_regular(std::uint32_t(state.range(0)), 3, rng).graph;
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_static(g, 0, seed++));
    }
}
BENCHMARK(bm_static_push_regular)->Arg(10000)->Arg(100000);

void bm_incremental_push(benchmark::State& state) {
    const std::uint32_t n = std::uint32_t(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_incremental(n, 3, seed++, 0));
    }
}
BENCHMARK(bm_incremental_push)->Arg(10000)->Arg(100000);

void bm_sample_matching(benchmark::State& state) {
    std::vector<CloneId> universe(state.range(0));
    std::iota(universe.begin(), universe.end(), CloneId(0));
    Rng rng(17);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_matching(universe, rng));
    }
}
BENCHMARK(bm_sample_matching)->Arg(30000)->Arg(300000);

void bm_simple_rejection(benchmark::State& state) {
    Rng rng(23);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_simple_regular(std::uint32_t(state.range(0)), 3, rng));
    }
}
BENCHMARK(bm_simple_rejection)->Arg(1000)->Arg(10000);

void bm_edges_within(benchmark::State& state) {
    const Graph g = paley_graph(401);
    Rng rng(31);
    const VertexSet s = random_vertex_set(401, 200, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(edges_within(g, s));
    }
}
BENCHMARK(bm_edges_within);

void bm_theory_integrate(benchmark::State& state) {
    TheoryParams tp;
    tp.d = 3;
    tp.n = 1000000;
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate(tp));
    }
}
BENCHMARK(bm_theory_integrate);

}  // namespace

BENCHMARK_MAIN();
