#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "crossmap/experiment.hpp"

namespace crossmap {

struct SuiteDefaults {
    std::uint32_t k = 256;
    std::optional<std::uint32_t> s; // absent: default_crossbar_count per workload
    std::vector<Algo> algos{Algo::hco, Algo::pso};
    std::vector<std::uint64_t> seeds{1};
    std::uint32_t repetitions = 3;
    PsoConfig pso;
    std::uint32_t hco_max_iters = 0;
};

struct SuiteWorkload {
    std::string name;
    std::vector<std::uint32_t> layers; // generated workload when non-empty
    std::filesystem::path file;        // loaded workload when non-empty
    std::uint32_t spikes_lo = 1;
    std::uint32_t spikes_hi = 50;
    std::uint64_t total_spikes = 0; // rescale target, 0 keeps the raw total
    std::optional<std::uint32_t> k, s;
};

struct Suite {
    SuiteDefaults defaults;
    std::vector<SuiteWorkload> workloads;
};

// Suite files use a small TOML subset: one optional [defaults] table and
// any number of [[workload]] tables, with integer, float, string and flat
// array values. Unknown keys are errors.
Suite load_suite(const std::filesystem::path& path);
Suite parse_suite(std::istream& in, const std::filesystem::path& base_dir,
                  const std::string& origin = "<stream>");

struct SuiteCell {
    std::string workload;
    Algo algo = Algo::hco;
    std::uint64_t seed = 0;
};

struct SuiteSummaryRow {
    std::string workload;
    // median pso wall time over median hco wall time
    double wall_ratio = 0.0;
    // mean hco inter-cluster spikes over mean pso inter-cluster spikes
    double inter_ratio = 0.0;
};

struct SuiteRunResult {
    std::vector<ExperimentRecord> records;
    std::vector<SuiteSummaryRow> summary; // workloads where hco and pso both ran
    std::uint32_t failures = 0;
};

// Runs every workload x algorithm x seed cell. Generated workloads are
// rebuilt per seed (the cell seed drives both the generator and pso), file
// workloads are loaded once. A failing cell is reported and skipped.
SuiteRunResult run_suite(
    const Suite& suite, const std::function<void(const ExperimentRecord&)>& on_record = {},
    const std::function<void(const SuiteCell&, const std::string& error)>& on_failure = {});

} // namespace crossmap
