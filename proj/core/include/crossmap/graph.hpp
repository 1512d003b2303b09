#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "crossmap/errors.hpp"

namespace crossmap {

struct Neuron {
    std::uint32_t id = 0;
    std::uint32_t layer = 0;

    friend bool operator==(const Neuron&, const Neuron&) = default;
};

// Directed edge weighted by the number of spikes communicated over it
// during one evaluation window.
struct Synapse {
    std::uint32_t src = 0;
    std::uint32_t dst = 0;
    std::uint64_t spikes = 0;

    friend bool operator==(const Synapse&, const Synapse&) = default;
};

// One entry of a neuron's adjacency list: the neuron at the far end of the
// synapse (dst for out-arcs, src for in-arcs) and the spike count.
struct Arc {
    std::uint32_t other = 0;
    std::uint64_t spikes = 0;
};

// Feedforward topology for the synthetic workload generator. Consecutive
// layers are fully connected; spike counts are drawn uniformly from
// [spikes_lo, spikes_hi] using the given seed.
struct TopologySpec {
    std::vector<std::uint32_t> layer_sizes;
    std::uint64_t spikes_lo = 1;
    std::uint64_t spikes_hi = 50;
    std::uint64_t seed = 0;
};

// Spike-annotated workload graph.
//
// Neurons are stored in canonical layer-wise order (layer ascending, id
// ascending within a layer). Neuron ids must be dense in [0, n). Synapses
// are sorted by (src, dst); duplicates are merged by summing their spike
// counts. Self-loops are rejected. Instances are immutable after
// construction and safe to share across concurrent readers.
class SpikeGraph {
public:
    SpikeGraph() = default;
    SpikeGraph(std::vector<Neuron> neurons, std::vector<Synapse> synapses);

    std::uint32_t num_neurons() const { return static_cast<std::uint32_t>(neurons_.size()); }
    std::size_t num_synapses() const { return synapses_.size(); }
    std::uint64_t total_spikes() const { return total_spikes_; }

    // Canonical layer-wise order.
    const std::vector<Neuron>& neurons() const { return neurons_; }
    // Sorted by (src, dst), duplicates merged.
    const std::vector<Synapse>& synapses() const { return synapses_; }

    std::uint32_t layer_of(std::uint32_t id) const { return layer_[id]; }

    std::span<const Arc> out_arcs(std::uint32_t id) const {
        return {out_arcs_.data() + out_offsets_[id], out_offsets_[id + 1] - out_offsets_[id]};
    }
    std::span<const Arc> in_arcs(std::uint32_t id) const {
        return {in_arcs_.data() + in_offsets_[id], in_offsets_[id + 1] - in_offsets_[id]};
    }

    // position -> neuron id, in canonical order
    const std::vector<std::uint32_t>& canonical_order() const { return order_; }
    // neuron id -> position in the canonical order
    std::uint32_t canonical_pos(std::uint32_t id) const { return pos_[id]; }

    friend bool operator==(const SpikeGraph& a, const SpikeGraph& b) {
        return a.neurons_ == b.neurons_ && a.synapses_ == b.synapses_;
    }

private:
    std::vector<Neuron> neurons_;
    std::vector<Synapse> synapses_;
    std::uint64_t total_spikes_ = 0;
    std::vector<std::uint32_t> layer_;
    std::vector<std::uint32_t> order_;
    std::vector<std::uint32_t> pos_;
    std::vector<std::size_t> out_offsets_;
    std::vector<Arc> out_arcs_;
    std::vector<std::size_t> in_offsets_;
    std::vector<Arc> in_arcs_;
};

// Deterministic synthetic workload; identical spec (seed included) produces
// a bit-identical graph.
SpikeGraph generate_feedforward(const TopologySpec& spec);

// Rescales every spike count so the graph total becomes exactly
// target_total (largest-remainder rounding, deterministic). Throws
// validation_error when the graph has no spikes and target_total > 0.
SpikeGraph rescale_total_spikes(const SpikeGraph& g, std::uint64_t target_total);

// Text format, line oriented:
//   snngraph v1 <n_neurons> <n_synapses>
//   N <id> <layer>
//   S <src> <dst> <spikes>
// '#' begins a comment line; blank lines are ignored.
SpikeGraph load_graph(const std::filesystem::path& path);
SpikeGraph read_graph(std::istream& in, const std::string& origin = "<stream>");
void save_graph(const SpikeGraph& g, const std::filesystem::path& path);
void write_graph(const SpikeGraph& g, std::ostream& out);

} // namespace crossmap
