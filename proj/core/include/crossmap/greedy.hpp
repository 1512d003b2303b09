#pragma once

#include <cstdint>

#include "crossmap/graph.hpp"
#include "crossmap/partition.hpp"

namespace crossmap {

struct GreedyResult {
    Partition partition;
    // arc visits performed while maintaining the running load; one per
    // adjacency entry touched, so a full sweep costs exactly 2*m.
    std::uint64_t weight_accumulations = 0;
};

// Single pass over the canonical (layer-major) neuron order. A cluster is
// closed when the crossbar is full, or early when its outgoing load already
// exceeds the per-crossbar mean of the total spike count and enough spare
// slots remain to place the rest. Throws like ensure_feasible.
GreedyResult greedy_sweep(const SpikeGraph& g, const HardwareConfig& hw);

Partition greedy_partition(const SpikeGraph& g, const HardwareConfig& hw);

// Outgoing crossing spikes of the canonical-order slice [begin, end):
// spikes on synapses whose source lies inside and whose target lies
// outside. Reference implementation for the incremental bookkeeping.
std::uint64_t running_load(const SpikeGraph& g, std::uint32_t begin, std::uint32_t end);

} // namespace crossmap
