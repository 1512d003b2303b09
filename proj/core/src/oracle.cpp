#include "crossmap/oracle.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "crossmap/errors.hpp"

namespace crossmap {

namespace {

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    return a > std::numeric_limits<std::uint64_t>::max() - b
               ? std::numeric_limits<std::uint64_t>::max()
               : a + b;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    if (a > std::numeric_limits<std::uint64_t>::max() / b)
        return std::numeric_limits<std::uint64_t>::max();
    return a * b;
}

// sum_{j=0..s-1} C(n-1, j): contiguous partitions of n items into <= s blocks.
std::uint64_t count_contiguous(std::uint32_t n, std::uint32_t s) {
    if (n == 0) return 1;
    std::uint64_t total = 0, c = 1; // C(n-1, 0)
    for (std::uint32_t j = 0; j < s; ++j) {
        total = sat_add(total, c);
        if (j + 1 > n - 1) break;
        // C(n-1, j+1) = C(n-1, j) * (n-1-j) / (j+1), exact at each step
        c = sat_mul(c, n - 1 - j) / (j + 1);
    }
    return total;
}

struct ContiguousSearch {
    const SpikeGraph& g;
    const HardwareConfig hw;
    std::uint32_t n;

    ContiguousSearch(const SpikeGraph& graph, const HardwareConfig& config)
        : g(graph), hw(config), n(graph.num_neurons()) {}

    std::vector<std::uint32_t> cuts;
    std::vector<std::uint32_t> best_cuts;
    Objective best{std::numeric_limits<std::uint64_t>::max(),
                   std::numeric_limits<std::uint64_t>::max()};
    bool found = false;

    // Loads recomputed per complete placement; instances are tiny by
    // construction so clarity beats speed here.
    void evaluate() {
        Partition p;
        p.order.assign(g.canonical_order().begin(), g.canonical_order().end());
        p.boundaries = cuts;
        const CostReport r = max_cost(g, p);
        const Objective obj = r.objective();
        if (!found || obj < best) {
            best = obj;
            best_cuts = cuts;
            found = true;
        }
    }

    // Extend the placement whose last cut is at 'start'. Trying the
    // "no further cut" branch first, then cuts left to right, visits
    // boundary vectors in lexicographic order, so on ties the first
    // (lexicographically smallest) optimum is kept.
    void descend(std::uint32_t start) {
        const bool tail_fits = n - start <= hw.crossbar_size;
        if (tail_fits) evaluate();
        if (cuts.size() + 1 == hw.crossbar_count) return;
        const std::uint32_t hi = std::min<std::uint64_t>(
            n - 1, static_cast<std::uint64_t>(start) + hw.crossbar_size);
        for (std::uint32_t cut = start + 1; cut <= hi; ++cut) {
            cuts.push_back(cut);
            descend(cut);
            cuts.pop_back();
        }
    }
};

} // namespace

Partition exhaustive_contiguous(const SpikeGraph& g, const HardwareConfig& hw,
                                std::uint64_t max_placements) {
    ensure_feasible(g, hw);
    const std::uint64_t count = count_contiguous(g.num_neurons(), hw.crossbar_count);
    if (count > max_placements)
        throw instance_too_large_error(
            "contiguous search space has " + std::to_string(count) +
            " placements, cap is " + std::to_string(max_placements));

    ContiguousSearch search(g, hw);
    if (g.num_neurons() == 0) {
        Partition p;
        return p;
    }
    search.descend(0);
    // ensure_feasible guarantees some capacity-respecting placement exists
    Partition p;
    p.order.assign(g.canonical_order().begin(), g.canonical_order().end());
    p.boundaries = search.best_cuts;
    return p;
}

Assignment exhaustive_assignment(const SpikeGraph& g, std::uint32_t num_clusters,
                                 std::uint64_t max_assignments, std::uint32_t capacity) {
    if (num_clusters == 0) throw validation_error("exhaustive_assignment: zero clusters");
    const std::uint32_t n = g.num_neurons();
    if (capacity && static_cast<std::uint64_t>(capacity) * num_clusters < n)
        throw infeasible_error("exhaustive_assignment: " + std::to_string(n) +
                               " neurons exceed capacity " +
                               std::to_string(static_cast<std::uint64_t>(capacity) * num_clusters));

    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < n; ++i) count = sat_mul(count, num_clusters);
    if (count > max_assignments)
        throw instance_too_large_error("assignment search space has " + std::to_string(count) +
                                       " candidates, cap is " + std::to_string(max_assignments));

    std::vector<std::uint32_t> sizes(num_clusters, 0);
    Assignment a(n, 0), best_a(n, 0);
    bool found = false;
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    for (;;) {
        bool fits = true;
        if (capacity) {
            std::fill(sizes.begin(), sizes.end(), 0u);
            for (std::uint32_t c : a)
                if (++sizes[c] > capacity) fits = false;
        }
        std::uint64_t inter = 0;
        if (fits) {
            for (const Synapse& syn : g.synapses())
                if (a[syn.src] != a[syn.dst]) inter += syn.spikes;
        }
        if (fits && (!found || inter < best)) {
            found = true;
            best = inter;
            best_a = a;
        }
        // odometer, last index fastest: enumerates assignments in
        // lexicographic order
        std::uint32_t i = n;
        while (i > 0) {
            --i;
            if (++a[i] < num_clusters) break;
            a[i] = 0;
            if (i == 0) return best_a;
        }
        if (n == 0) return best_a;
    }
}

CostReport recount_cost(const SpikeGraph& g, const Assignment& assignment,
                        std::uint32_t num_clusters) {
    if (assignment.size() != g.num_neurons())
        throw validation_error("recount_cost: assignment covers " +
                               std::to_string(assignment.size()) + " neurons, graph has " +
                               std::to_string(g.num_neurons()));
    for (std::uint32_t id = 0; id < assignment.size(); ++id)
        if (assignment[id] >= num_clusters)
            throw validation_error("recount_cost: neuron " + std::to_string(id) +
                                   " assigned to cluster " + std::to_string(assignment[id]) +
                                   ", only " + std::to_string(num_clusters) + " clusters");

    CostReport r;
    r.cluster_loads.assign(num_clusters, 0);
    for (std::uint32_t c = 0; c < num_clusters; ++c) {
        std::uint64_t load = 0;
        for (const Synapse& syn : g.synapses())
            if (assignment[syn.src] == c && assignment[syn.dst] != c) load += syn.spikes;
        r.cluster_loads[c] = load;
        r.max_load = std::max(r.max_load, load);
        r.inter_cluster_spikes += load;
    }
    r.normalized_inter_cluster =
        g.total_spikes() ? static_cast<double>(r.inter_cluster_spikes) /
                               static_cast<double>(g.total_spikes())
                         : 0.0;
    return r;
}

} // namespace crossmap
