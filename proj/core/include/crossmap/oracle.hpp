#pragma once

#include <cstdint>

#include "crossmap/graph.hpp"
#include "crossmap/partition.hpp"

namespace crossmap {

// Exhaustive search over every contiguous partition of the canonical order
// into at most crossbar_count capacity-respecting clusters. Minimizes
// (max_load, inter_cluster_spikes) lexicographically; among optima the
// lexicographically smallest boundary vector wins. Throws
// instance_too_large_error when the placement count exceeds max_placements.
Partition exhaustive_contiguous(const SpikeGraph& g, const HardwareConfig& hw,
                                std::uint64_t max_placements = 1'000'000);

// Exhaustive search over all s^n assignments (tiny instances only).
// Minimizes inter_cluster_spikes alone; first optimum in odometer order
// wins. capacity > 0 restricts to assignments whose clusters hold at most
// that many neurons. Throws instance_too_large_error past max_assignments.
Assignment exhaustive_assignment(const SpikeGraph& g, std::uint32_t num_clusters,
                                 std::uint64_t max_assignments = 10'000'000,
                                 std::uint32_t capacity = 0);

// Deliberately naive cost recount: walks every synapse once per cluster.
// Slow on purpose; exists to cross-check the incremental bookkeeping.
CostReport recount_cost(const SpikeGraph& g, const Assignment& assignment,
                        std::uint32_t num_clusters);

} // namespace crossmap
