#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "crossmap/graph.hpp"
#include "crossmap/hill_climb.hpp"
#include "crossmap/partition.hpp"
#include "crossmap/pso.hpp"

namespace crossmap {

inline constexpr const char* kExperimentCsvHeader =
    "workload,n,synapses,total_spikes,algo,k,s,seed,wall_ms,max_load,"
    "inter_cluster_spikes,normalized_inter_cluster";

enum class Algo { greedy, hco, pso, oracle_contiguous };

const char* algo_name(Algo algo);
Algo parse_algo(const std::string& name); // throws validation_error on unknown names

struct AlgoOptions {
    Algo algo = Algo::hco;
    std::uint32_t max_iters = 0; // climb cap, 0 for the default
    PsoConfig pso;               // seed is overridden per repetition
};

struct ExperimentRecord {
    std::string workload;
    std::uint32_t n = 0;
    std::uint64_t synapses = 0;
    std::uint64_t total_spikes = 0;
    Algo algo = Algo::hco;
    std::uint32_t k = 0;
    std::uint32_t s = 0;
    std::uint64_t seed = 0;
    double wall_ms = 0.0;
    std::uint64_t max_load = 0;
    std::uint64_t inter_cluster_spikes = 0;
    double normalized_inter_cluster = 0.0;
};

// One CSV row matching kExperimentCsvHeader; wall_ms with three decimals.
std::string to_csv(const ExperimentRecord& record);

struct ExperimentOutcome {
    std::vector<ExperimentRecord> records; // one per repetition
    Mapping best_mapping;                  // lowest (max_load, inter) across reps
    Objective best_objective;
    std::vector<ClimbTrace> climb_traces;        // hco runs only, one per rep
    std::vector<std::vector<double>> pso_traces; // pso runs only, one per rep
};

// Runs the chosen algorithm `repetitions` times on the same graph.
// Repetition r uses seed base_seed + r (only pso consumes it; it is still
// recorded for the others). Only the algorithm call itself is timed.
ExperimentOutcome run_experiment(
    const SpikeGraph& g, const std::string& workload, const HardwareConfig& hw,
    const AlgoOptions& opts, std::uint64_t base_seed, std::uint32_t repetitions,
    const std::function<void(const ExperimentRecord&)>& on_record = {});

// Rule of thumb used when no crossbar count is given: enough crossbars for
// every neuron plus two spare.
std::uint32_t default_crossbar_count(std::uint32_t n, std::uint32_t k);

} // namespace crossmap
