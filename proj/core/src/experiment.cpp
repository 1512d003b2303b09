#include "crossmap/experiment.hpp"

#include <chrono>
#include <cstdio>

#include "crossmap/errors.hpp"
#include "crossmap/greedy.hpp"
#include "crossmap/oracle.hpp"

namespace crossmap {

const char* algo_name(Algo algo) {
    switch (algo) {
    case Algo::greedy: return "greedy";
    case Algo::hco: return "hco";
    case Algo::pso: return "pso";
    case Algo::oracle_contiguous: return "oracle-contiguous";
    }
    return "?";
}

Algo parse_algo(const std::string& name) {
    if (name == "greedy") return Algo::greedy;
    if (name == "hco") return Algo::hco;
    if (name == "pso") return Algo::pso;
    if (name == "oracle-contiguous") return Algo::oracle_contiguous;
    throw validation_error("unknown algorithm '" + name +
                           "' (expected greedy, hco, pso or oracle-contiguous)");
}

std::string to_csv(const ExperimentRecord& r) {
    char buf[256];
    std::snprintf(buf, sizeof buf, ",%u,%llu,%llu,%s,%u,%u,%llu,%.3f,%llu,%llu,%.6f", r.n,
                  static_cast<unsigned long long>(r.synapses),
                  static_cast<unsigned long long>(r.total_spikes), algo_name(r.algo), r.k, r.s,
                  static_cast<unsigned long long>(r.seed), r.wall_ms,
                  static_cast<unsigned long long>(r.max_load),
                  static_cast<unsigned long long>(r.inter_cluster_spikes),
                  r.normalized_inter_cluster);
    return r.workload + buf;
}

std::uint32_t default_crossbar_count(std::uint32_t n, std::uint32_t k) {
    if (k == 0) throw validation_error("default_crossbar_count: crossbar size is zero");
    return (n + k - 1) / k + 2;
}

ExperimentOutcome run_experiment(const SpikeGraph& g, const std::string& workload,
                                 const HardwareConfig& hw, const AlgoOptions& opts,
                                 std::uint64_t base_seed, std::uint32_t repetitions,
                                 const std::function<void(const ExperimentRecord&)>& on_record) {
    if (repetitions == 0) throw validation_error("run_experiment: zero repetitions");
    ensure_feasible(g, hw);

    ExperimentOutcome out;
    out.best_mapping.num_clusters = hw.crossbar_count;
    bool have_best = false;

    using clock = std::chrono::steady_clock;
    for (std::uint32_t rep = 0; rep < repetitions; ++rep) {
        const std::uint64_t seed = base_seed + rep;
        Assignment assignment;
        CostReport report;
        double wall_ms = 0.0;

        switch (opts.algo) {
        case Algo::greedy: {
            const auto t0 = clock::now();
            const Partition p = greedy_partition(g, hw);
            const auto t1 = clock::now();
            wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            assignment = p.to_assignment();
            report = max_cost(g, p);
            break;
        }
        case Algo::hco: {
            ClimbOptions copts;
            copts.max_iters = opts.max_iters;
            const auto t0 = clock::now();
            ClimbResult r = hco_partition(g, hw, copts);
            const auto t1 = clock::now();
            wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            assignment = r.partition.to_assignment();
            report = r.report;
            out.climb_traces.push_back(std::move(r.trace));
            break;
        }
        case Algo::pso: {
            PsoConfig cfg = opts.pso;
            cfg.seed = seed;
            const auto t0 = clock::now();
            PsoResult r = pso_partition(g, hw, cfg);
            const auto t1 = clock::now();
            wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            assignment = std::move(r.assignment);
            report = std::move(r.report);
            out.pso_traces.push_back(std::move(r.best_fitness_trace));
            break;
        }
        case Algo::oracle_contiguous: {
            const auto t0 = clock::now();
            const Partition p = exhaustive_contiguous(g, hw);
            const auto t1 = clock::now();
            wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            assignment = p.to_assignment();
            report = max_cost(g, p);
            break;
        }
        }

        ExperimentRecord rec;
        rec.workload = workload;
        rec.n = g.num_neurons();
        rec.synapses = g.num_synapses();
        rec.total_spikes = g.total_spikes();
        rec.algo = opts.algo;
        rec.k = hw.crossbar_size;
        rec.s = hw.crossbar_count;
        rec.seed = seed;
        rec.wall_ms = wall_ms;
        rec.max_load = report.max_load;
        rec.inter_cluster_spikes = report.inter_cluster_spikes;
        rec.normalized_inter_cluster = report.normalized_inter_cluster;

        if (!have_best || report.objective() < out.best_objective) {
            have_best = true;
            out.best_objective = report.objective();
            out.best_mapping.assignment = std::move(assignment);
        }
        if (on_record) on_record(rec);
        out.records.push_back(std::move(rec));
    }
    return out;
}

} // namespace crossmap
