#include <benchmark/benchmark.h>

#include "crossmap/graph.hpp"
#include "crossmap/greedy.hpp"
#include "crossmap/hill_climb.hpp"
#include "crossmap/oracle.hpp"
#include "crossmap/partition.hpp"
#include "crossmap/pso.hpp"

namespace {

using namespace crossmap;

const SpikeGraph& mid_graph() {
    static const SpikeGraph g = [] {
        TopologySpec spec;
        spec.layer_sizes = {400, 400, 100};
        spec.seed = 11;
        return generate_feedforward(spec);
    }();
    return g;
}

const SpikeGraph& small_graph() {
    static const SpikeGraph g = [] {
        TopologySpec spec;
        spec.layer_sizes = {60, 60, 30};
        spec.seed = 5;
        return generate_feedforward(spec);
    }();
    return g;
}

constexpr HardwareConfig kMidHw{256, 6};
constexpr HardwareConfig kSmallHw{32, 7};

void BM_GreedySweep(benchmark::State& state) {
    const SpikeGraph& g = mid_graph();
    for (auto _ : state) {
        GreedyResult r = greedy_sweep(g, kMidHw);
        benchmark::DoNotOptimize(r.partition.boundaries);
    }
}
BENCHMARK(BM_GreedySweep);

void BM_HillClimb(benchmark::State& state) {
    const SpikeGraph& g = mid_graph();
    const Partition start = greedy_partition(g, kMidHw);
    for (auto _ : state) {
        ClimbResult r = climb(g, start, kMidHw);
        benchmark::DoNotOptimize(r.report.max_load);
    }
}
BENCHMARK(BM_HillClimb);

void BM_MaxCost(benchmark::State& state) {
    const SpikeGraph& g = mid_graph();
    const Partition p = greedy_partition(g, kMidHw);
    for (auto _ : state) {
        CostReport r = max_cost(g, p);
        benchmark::DoNotOptimize(r.max_load);
    }
}
BENCHMARK(BM_MaxCost);

void BM_RecountCost(benchmark::State& state) {
    const SpikeGraph& g = mid_graph();
    const Partition p = greedy_partition(g, kMidHw);
    const Assignment a = p.to_assignment();
    for (auto _ : state) {
        CostReport r = recount_cost(g, a, kMidHw.crossbar_count);
        benchmark::DoNotOptimize(r.max_load);
    }
}
BENCHMARK(BM_RecountCost);

void BM_PsoSearch(benchmark::State& state) {
    const SpikeGraph& g = small_graph();
    PsoConfig cfg;
    cfg.swarm_size = 10;
    cfg.iterations = static_cast<std::uint32_t>(state.range(0));
    cfg.seed = 3;
    for (auto _ : state) {
        PsoResult r = pso_partition(g, kSmallHw, cfg);
        benchmark::DoNotOptimize(r.gbest_fitness);
    }
}
BENCHMARK(BM_PsoSearch)->Arg(20)->Arg(80);

} // namespace

BENCHMARK_MAIN();
