#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "crossmap/graph.hpp"

namespace crossmap {

// Hardware platform: crossbar_count crossbars, each hosting at most
// crossbar_size neurons.
struct HardwareConfig {
    std::uint32_t crossbar_size = 0;  // k
    std::uint32_t crossbar_count = 0; // s
};

// neuron id -> cluster index
using Assignment = std::vector<std::uint32_t>;

// Contiguous partition: a linear neuron order cut into clusters by strictly
// increasing boundary positions in (0, n). boundaries.size()+1 clusters are
// in use; crossbars beyond that stay empty (trailing empty clusters are
// legal, interior ones are not representable).
struct Partition {
    std::vector<std::uint32_t> order;      // permutation of neuron ids
    std::vector<std::uint32_t> boundaries; // cut positions

    std::uint32_t num_clusters() const {
        return static_cast<std::uint32_t>(boundaries.size()) + 1;
    }
    std::uint32_t cluster_begin(std::uint32_t c) const {
        return c == 0 ? 0 : boundaries[c - 1];
    }
    std::uint32_t cluster_end(std::uint32_t c) const {
        return c < boundaries.size() ? boundaries[c]
                                     : static_cast<std::uint32_t>(order.size());
    }
    std::uint32_t cluster_size(std::uint32_t c) const {
        return cluster_end(c) - cluster_begin(c);
    }
    // Requires a well-formed partition (order is a permutation, boundaries
    // strictly increasing); use validate() first on untrusted data.
    Assignment to_assignment() const;

    friend bool operator==(const Partition&, const Partition&) = default;
};

// (max_load, inter_cluster_spikes), compared lexicographically.
struct Objective {
    std::uint64_t max_load = 0;
    std::uint64_t inter_cluster_spikes = 0;

    friend auto operator<=>(const Objective&, const Objective&) = default;
};

struct CostReport {
    std::vector<std::uint64_t> cluster_loads; // outgoing crossing spikes per cluster
    std::uint64_t max_load = 0;
    std::uint64_t inter_cluster_spikes = 0;
    double normalized_inter_cluster = 0.0; // inter / total, 0 when total is 0

    Objective objective() const { return {max_load, inter_cluster_spikes}; }
};

// CSV fields "max_load,inter_cluster_spikes,normalized_inter_cluster".
std::string cost_report_csv(const CostReport& report);

// Spikes leaving the given cluster for a different cluster (crossing
// synapses counted at their source). Throws std::out_of_range on a bad
// cluster index.
std::uint64_t cluster_load(const SpikeGraph& g, const Partition& p, std::uint32_t cluster);

CostReport max_cost(const SpikeGraph& g, const Partition& p);
CostReport max_cost(const SpikeGraph& g, const Assignment& assignment,
                    std::uint32_t num_clusters);

// total_spikes / crossbar_count
double mean_load(const SpikeGraph& g, const HardwareConfig& hw);

struct Violation {
    enum class Kind {
        capacity_exceeded,
        duplicate_assignment,
        missing_neuron,
        boundary_disorder,
        cluster_out_of_range,
        too_many_clusters,
    };
    Kind kind;
    std::string message;
};

// Violations are data, not errors: an empty list means valid.
std::vector<Violation> validate(const SpikeGraph& g, const Partition& p,
                                const HardwareConfig& hw);
std::vector<Violation> validate(const SpikeGraph& g, const Assignment& assignment,
                                const HardwareConfig& hw);

// Throws validation_error on a degenerate config and infeasible_error when
// the graph cannot fit (n > k*s).
void ensure_feasible(const SpikeGraph& g, const HardwareConfig& hw);

// Mapping file, text:
//   snnmap v1 <n> <s>
//   M <neuron_id> <cluster_index>
struct Mapping {
    Assignment assignment;
    std::uint32_t num_clusters = 0;
};

void save_mapping(const Mapping& m, const std::filesystem::path& path);
void write_mapping(const Mapping& m, std::ostream& out);
Mapping load_mapping(const std::filesystem::path& path);
Mapping read_mapping(std::istream& in, const std::string& origin = "<stream>");

} // namespace crossmap
