#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "crossmap/graph.hpp"
#include "crossmap/partition.hpp"

namespace crossmap {

enum class MoveDirection { left, right };

// Shifting boundary j one position. left: the last neuron of cluster j
// moves into cluster j+1. right: the first neuron of cluster j+1 moves
// into cluster j.
struct Move {
    std::uint32_t boundary_index = 0;
    MoveDirection direction = MoveDirection::left;

    friend bool operator==(const Move&, const Move&) = default;
};

// All admissible moves: the shifted boundary must stay strictly between
// its neighbors (no cluster empties) and the growing cluster must still
// fit the crossbar. At most 2*(num_clusters-1) moves.
std::vector<Move> neighborhood(const Partition& p, const HardwareConfig& hw);

enum class ClimbTermination { local_minimum, iteration_cap };

struct ClimbTrace {
    std::uint32_t iterations = 0; // accepted moves
    // objective before any move, then after each accepted move; strictly
    // decreasing lexicographically
    std::vector<Objective> cost_sequence;
    ClimbTermination terminated_by = ClimbTermination::local_minimum;
};

struct ClimbOptions {
    std::uint32_t max_iters = 0; // 0: 10 * num_neurons
    std::function<void(const Partition&, const CostReport&)> on_step;
};

struct ClimbResult {
    Partition partition;
    ClimbTrace trace;
    CostReport report;
};

// Steepest descent over the boundary-shift neighborhood from the given
// start, which must be valid for the hardware. Each round takes the move
// with the best (max_load, inter_cluster_spikes) improvement, ties broken
// by lowest boundary index, left before right. Stops at a local minimum or
// at the iteration cap.
ClimbResult climb(const SpikeGraph& g, const Partition& start, const HardwareConfig& hw,
                  const ClimbOptions& opts = {});

// Greedy sweep followed by climb.
ClimbResult hco_partition(const SpikeGraph& g, const HardwareConfig& hw,
                          const ClimbOptions& opts = {});

} // namespace crossmap
