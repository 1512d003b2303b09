#include "crossmap/greedy.hpp"

namespace crossmap {

std::uint64_t running_load(const SpikeGraph& g, std::uint32_t begin, std::uint32_t end) {
    std::uint64_t load = 0;
    for (std::uint32_t i = begin; i < end; ++i) {
        const std::uint32_t id = g.canonical_order()[i];
        for (const Arc& arc : g.out_arcs(id)) {
            const std::uint32_t pos = g.canonical_pos(arc.other);
            if (pos < begin || pos >= end) load += arc.spikes;
        }
    }
    return load;
}

GreedyResult greedy_sweep(const SpikeGraph& g, const HardwareConfig& hw) {
    ensure_feasible(g, hw);

    const std::uint32_t n = g.num_neurons();
    const std::uint32_t k = hw.crossbar_size;
    const std::uint32_t s = hw.crossbar_count;
    const std::uint64_t total = g.total_spikes();

    GreedyResult res;
    res.partition.order.assign(g.canonical_order().begin(), g.canonical_order().end());
    if (n == 0) return res;

    // Spare slots across all crossbars. Closing a cluster at size L < k
    // wastes k-L of them; while margin covers the waste, the tail still
    // fits even if every later cluster is packed to k.
    std::uint64_t margin = static_cast<std::uint64_t>(k) * s - n;

    std::uint32_t start = 0;    // canonical position where the open cluster begins
    std::uint64_t load = 0;     // its current outgoing crossing spikes
    std::uint32_t cuts = 0;

    for (std::uint32_t i = 0; i < n; ++i) {
        const std::uint32_t id = res.partition.order[i];

        // Fold neuron i into [start, i]: its out-arcs leaving the slice
        // add, its in-arcs arriving from inside stop crossing.
        for (const Arc& arc : g.out_arcs(id)) {
            ++res.weight_accumulations;
            const std::uint32_t pos = g.canonical_pos(arc.other);
            if (pos < start || pos > i) load += arc.spikes;
        }
        for (const Arc& arc : g.in_arcs(id)) {
            ++res.weight_accumulations;
            const std::uint32_t pos = g.canonical_pos(arc.other);
            if (pos >= start && pos < i) load -= arc.spikes;
        }

        if (i + 1 == n) break;
        if (cuts == s - 1) continue;

        const std::uint32_t size = i + 1 - start;
        bool cut = false;
        if (size == k) {
            cut = true;
        } else if (static_cast<unsigned __int128>(load) * s > total && margin >= k - size) {
            margin -= k - size;
            cut = true;
        }
        if (cut) {
            res.partition.boundaries.push_back(i + 1);
            start = i + 1;
            load = 0;
            ++cuts;
        }
    }
    return res;
}

Partition greedy_partition(const SpikeGraph& g, const HardwareConfig& hw) {
    return greedy_sweep(g, hw).partition;
}

} // namespace crossmap
