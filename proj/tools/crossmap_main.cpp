// crossmap command line: generate workload graphs, map them onto crossbar
// hardware, and run benchmark suites.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crossmap/errors.hpp"
#include "crossmap/experiment.hpp"
#include "crossmap/graph.hpp"
#include "crossmap/partition.hpp"
#include "crossmap/suite.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitTooLarge = 4;

struct GenArgs {
    std::vector<std::uint32_t> layers;
    std::uint32_t spikes_lo = 1;
    std::uint32_t spikes_hi = 50;
    std::uint64_t seed = 0;
    std::uint64_t total_spikes = 0;
    std::string out;
};

struct MapArgs {
    std::string graph;
    std::uint32_t k = 0;
    std::uint32_t s = 0; // 0: derive from n and k
    std::string algo = "hco";
    std::string out;
    std::string metrics;
    std::string trace;
    std::string workload;
    std::uint64_t seed = 1;
    std::uint32_t reps = 1;
    std::uint32_t max_iters = 0;
    std::uint32_t swarm = 50;
    std::uint32_t iters = 2000;
    double penalty = 1000.0;
};

struct BenchArgs {
    std::string suite;
    std::string out = "results.csv";
};

int run_gen(const GenArgs& args) {
    crossmap::TopologySpec spec;
    spec.layer_sizes = args.layers;
    spec.spikes_lo = args.spikes_lo;
    spec.spikes_hi = args.spikes_hi;
    spec.seed = args.seed;

    crossmap::SpikeGraph g = crossmap::generate_feedforward(spec);
    if (args.total_spikes) g = crossmap::rescale_total_spikes(g, args.total_spikes);
    crossmap::save_graph(g, args.out);
    std::cout << "wrote " << args.out << ": " << g.num_neurons() << " neurons, "
              << g.num_synapses() << " synapses, " << g.total_spikes() << " spikes\n";
    return kExitOk;
}

void write_climb_trace(const crossmap::ClimbTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "iter,max_load,inter_cluster_spikes\n";
    for (std::size_t i = 0; i < trace.cost_sequence.size(); ++i)
        out << i << ',' << trace.cost_sequence[i].max_load << ','
            << trace.cost_sequence[i].inter_cluster_spikes << '\n';
}

void write_pso_trace(const std::vector<double>& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "iter,best_fitness\n";
    char buf[64];
    for (std::size_t i = 0; i < trace.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.3f\n", i + 1, trace[i]);
        out << buf;
    }
}

int run_map(const MapArgs& args) {
    const crossmap::Algo algo = crossmap::parse_algo(args.algo);
    if (!args.trace.empty() && algo != crossmap::Algo::hco && algo != crossmap::Algo::pso)
        throw crossmap::validation_error("--trace needs --algo hco or pso");

    const crossmap::SpikeGraph g = crossmap::load_graph(args.graph);
    crossmap::HardwareConfig hw;
    hw.crossbar_size = args.k;
    hw.crossbar_count =
        args.s ? args.s : crossmap::default_crossbar_count(g.num_neurons(), args.k);

    crossmap::ensure_feasible(g, hw);

    crossmap::AlgoOptions opts;
    opts.algo = algo;
    opts.max_iters = args.max_iters;
    opts.pso.swarm_size = args.swarm;
    opts.pso.iterations = args.iters;
    opts.pso.capacity_penalty = args.penalty;

    const std::string workload =
        args.workload.empty() ? std::filesystem::path(args.graph).stem().string()
                              : args.workload;

    std::ofstream metrics;
    if (!args.metrics.empty()) {
        const bool need_header = !std::filesystem::exists(args.metrics) ||
                                 std::filesystem::file_size(args.metrics) == 0;
        metrics.open(args.metrics, std::ios::app);
        if (!metrics)
            throw std::runtime_error("cannot open " + args.metrics + " for writing");
        if (need_header) metrics << crossmap::kExperimentCsvHeader << '\n' << std::flush;
    } else {
        std::cout << crossmap::kExperimentCsvHeader << '\n';
    }

    const auto on_record = [&](const crossmap::ExperimentRecord& rec) {
        if (metrics.is_open())
            metrics << crossmap::to_csv(rec) << '\n' << std::flush;
        else
            std::cout << crossmap::to_csv(rec) << '\n';
    };

    const crossmap::ExperimentOutcome out =
        crossmap::run_experiment(g, workload, hw, opts, args.seed, args.reps, on_record);

    if (!args.out.empty()) crossmap::save_mapping(out.best_mapping, args.out);
    if (!args.trace.empty()) {
        if (algo == crossmap::Algo::hco)
            write_climb_trace(out.climb_traces.front(), args.trace);
        else
            write_pso_trace(out.pso_traces.front(), args.trace);
    }
    if (metrics.is_open())
        std::cout << "best: max_load=" << out.best_objective.max_load
                  << " inter_cluster_spikes=" << out.best_objective.inter_cluster_spikes << '\n';
    return kExitOk;
}

int run_bench(const BenchArgs& args) {
    const crossmap::Suite suite = crossmap::load_suite(args.suite);

    std::ofstream out(args.out);
    if (!out) throw std::runtime_error("cannot open " + args.out + " for writing");
    out << crossmap::kExperimentCsvHeader << '\n';

    const auto on_record = [&](const crossmap::ExperimentRecord& rec) {
        out << crossmap::to_csv(rec) << '\n' << std::flush;
    };
    const auto on_failure = [&](const crossmap::SuiteCell& cell, const std::string& error) {
        const std::string line = "# cell-failed workload=" + cell.workload +
                                 " algo=" + crossmap::algo_name(cell.algo) +
                                 " seed=" + std::to_string(cell.seed) + ": " + error;
        out << line << '\n' << std::flush;
        std::cerr << line << '\n';
    };

    const crossmap::SuiteRunResult result = crossmap::run_suite(suite, on_record, on_failure);

    char buf[64];
    for (const crossmap::SuiteSummaryRow& row : result.summary) {
        std::snprintf(buf, sizeof buf, "%.2f", row.wall_ratio);
        std::cout << "workload " << row.workload << ": wall pso/hco = " << buf << "x";
        std::snprintf(buf, sizeof buf, "%.4f", row.inter_ratio);
        std::cout << ", spikes hco/pso = " << buf << '\n';
    }
    std::cout << result.records.size() << " records, " << result.failures
              << " failed cells -> " << args.out << '\n';
    return result.failures ? kExitError : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spike-count aware mapping of layered workload graphs onto "
                 "fixed-size crossbars"};
    app.set_version_flag("--version", "crossmap 0.1.0");
    app.require_subcommand(1);

    GenArgs gen_args;
    CLI::App* gen = app.add_subcommand("gen", "generate a layered workload graph");
    gen->add_option("--layers", gen_args.layers, "layer sizes, comma separated")
        ->delimiter(',')
        ->required();
    gen->add_option("--spikes-lo", gen_args.spikes_lo, "minimum spikes per synapse");
    gen->add_option("--spikes-hi", gen_args.spikes_hi, "maximum spikes per synapse");
    gen->add_option("--seed", gen_args.seed, "generator seed");
    gen->add_option("--total-spikes", gen_args.total_spikes,
                    "rescale synapse spike counts to this exact total");
    gen->add_option("-o,--out", gen_args.out, "output graph file")->required();

    MapArgs map_args;
    CLI::App* map = app.add_subcommand("map", "map a workload graph onto crossbars");
    map->add_option("--graph", map_args.graph, "input graph file")->required();
    map->add_option("--k", map_args.k, "crossbar size (neurons per crossbar)")->required();
    map->add_option("--s", map_args.s, "crossbar count (default: ceil(n/k)+2)");
    map->add_option("--algo", map_args.algo, "greedy, hco, pso or oracle-contiguous");
    map->add_option("-o,--out", map_args.out, "write the best mapping here");
    map->add_option("--metrics", map_args.metrics, "append metric rows to this CSV");
    map->add_option("--trace", map_args.trace, "write the first repetition's trace CSV");
    map->add_option("--workload", map_args.workload, "workload name (default: graph stem)");
    map->add_option("--seed", map_args.seed, "base seed, repetition r uses seed+r");
    map->add_option("--reps", map_args.reps, "repetitions")->check(CLI::PositiveNumber);
    map->add_option("--max-iters", map_args.max_iters, "climb cap, 0 for 10*n");
    map->add_option("--swarm", map_args.swarm, "pso swarm size");
    map->add_option("--iters", map_args.iters, "pso iterations");
    map->add_option("--penalty", map_args.penalty, "pso capacity penalty");

    BenchArgs bench_args;
    CLI::App* bench = app.add_subcommand("bench", "run a suite of workloads");
    bench->add_option("--suite", bench_args.suite, "suite description file")->required();
    bench->add_option("-o,--out", bench_args.out, "results CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitBadInput;
    }

    try {
        if (gen->parsed()) return run_gen(gen_args);
        if (map->parsed()) return run_map(map_args);
        return run_bench(bench_args);
    } catch (const crossmap::infeasible_error& e) {
        std::cerr << "crossmap: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const crossmap::instance_too_large_error& e) {
        std::cerr << "crossmap: " << e.what() << '\n';
        return kExitTooLarge;
    } catch (const crossmap::parse_error& e) {
        std::cerr << "crossmap: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const crossmap::validation_error& e) {
        std::cerr << "crossmap: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "crossmap: " << e.what() << '\n';
        return kExitError;
    }
}
