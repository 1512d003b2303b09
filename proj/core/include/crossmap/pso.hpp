#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "crossmap/graph.hpp"
#include "crossmap/partition.hpp"

namespace crossmap {

struct PsoConfig {
    std::uint32_t swarm_size = 50;
    std::uint32_t iterations = 2000;
    double inertia = 0.7298;
    double cognitive = 1.49618;
    double social = 1.49618;
    double capacity_penalty = 1000.0;
    std::uint64_t seed = 0;
};

// Continuous particle position -> cluster per neuron: floor, clamped to
// [0, num_clusters-1].
Assignment decode_position(std::span<const double> position, std::uint32_t num_clusters);

struct PsoResult {
    Assignment assignment; // best found, capacity-repaired
    CostReport report;
    // global best fitness after each iteration; non-increasing
    std::vector<double> best_fitness_trace;
    double gbest_fitness = 0.0; // before repair
    std::uint64_t fitness_evaluations = 0;
};

// Particle swarm over continuous positions in [0, s]^n, fitness =
// inter-cluster spikes plus capacity_penalty per neuron over capacity.
// Deterministic for a fixed config. The returned assignment is the global
// best pushed into capacity by cheapest-move repair.
PsoResult pso_partition(const SpikeGraph& g, const HardwareConfig& hw, const PsoConfig& cfg);

} // namespace crossmap
