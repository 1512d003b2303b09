#include "crossmap/hill_climb.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "crossmap/errors.hpp"
#include "crossmap/greedy.hpp"

namespace crossmap {

namespace {

bool admissible(const Partition& p, const HardwareConfig& hw, const Move& mv) {
    const std::uint32_t j = mv.boundary_index;
    const std::uint32_t nb = static_cast<std::uint32_t>(p.boundaries.size());
    if (j >= nb) return false;
    if (mv.direction == MoveDirection::left) {
        const std::uint32_t lo = j > 0 ? p.boundaries[j - 1] : 0;
        return p.boundaries[j] - 1 > lo && p.cluster_size(j + 1) + 1 <= hw.crossbar_size;
    }
    const std::uint32_t hi =
        j + 1 < nb ? p.boundaries[j + 1] : static_cast<std::uint32_t>(p.order.size());
    return p.boundaries[j] + 1 < hi && p.cluster_size(j) + 1 <= hw.crossbar_size;
}

struct ClimbState {
    const SpikeGraph& g;
    const HardwareConfig hw;
    Partition p;

    ClimbState(const SpikeGraph& graph, const HardwareConfig& config, Partition start)
        : g(graph), hw(config), p(std::move(start)) {}
    Assignment a;
    std::vector<std::uint64_t> loads; // outgoing crossing spikes per cluster
    std::uint64_t max_load = 0;
    std::uint64_t inter = 0;

    void recompute() {
        const CostReport r = max_cost(g, p);
        a = p.to_assignment();
        loads = r.cluster_loads;
        max_load = r.max_load;
        inter = r.inter_cluster_spikes;
    }

    // Neuron that a move transfers, and its source/target clusters.
    struct Transfer {
        std::uint32_t id, from, to;
    };
    Transfer transfer_of(const Move& mv) const {
        const std::uint32_t j = mv.boundary_index;
        if (mv.direction == MoveDirection::left)
            return {p.order[p.boundaries[j] - 1], j, j + 1};
        return {p.order[p.boundaries[j]], j + 1, j};
    }

    // Load deltas on the source and target clusters when neuron t.id
    // leaves t.from for t.to. No other cluster's outgoing load changes:
    // arcs between third clusters and t.id keep crossing either way.
    std::pair<std::int64_t, std::int64_t> deltas(const Transfer& t) const {
        std::int64_t dc = 0, dt = 0;
        for (const Arc& arc : g.out_arcs(t.id)) {
            const std::uint32_t cl = a[arc.other];
            if (cl != t.from) dc -= static_cast<std::int64_t>(arc.spikes);
            if (cl != t.to) dt += static_cast<std::int64_t>(arc.spikes);
        }
        for (const Arc& arc : g.in_arcs(t.id)) {
            const std::uint32_t cl = a[arc.other];
            if (cl == t.from)
                dc += static_cast<std::int64_t>(arc.spikes);
            else if (cl == t.to)
                dt -= static_cast<std::int64_t>(arc.spikes);
        }
        return {dc, dt};
    }

    Objective after(const Transfer& t) const {
        const auto [dc, dt] = deltas(t);
        const std::uint64_t lc = loads[t.from] + dc;
        const std::uint64_t lt = loads[t.to] + dt;
        std::uint64_t mx = std::max(lc, lt);
        for (std::uint32_t c = 0; c < loads.size(); ++c)
            if (c != t.from && c != t.to) mx = std::max(mx, loads[c]);
        return {mx, inter + dc + dt};
    }

    void apply(const Move& mv, const Transfer& t, const Objective& obj) {
        const auto [dc, dt] = deltas(t);
        if (mv.direction == MoveDirection::left)
            p.boundaries[mv.boundary_index] -= 1;
        else
            p.boundaries[mv.boundary_index] += 1;
        a[t.id] = t.to;
        loads[t.from] += dc;
        loads[t.to] += dt;
        max_load = obj.max_load;
        inter = obj.inter_cluster_spikes;
    }

    CostReport report() const {
        CostReport r;
        r.cluster_loads = loads;
        r.max_load = max_load;
        r.inter_cluster_spikes = inter;
        r.normalized_inter_cluster =
            g.total_spikes() ? static_cast<double>(inter) / static_cast<double>(g.total_spikes())
                             : 0.0;
        return r;
    }
};

} // namespace

std::vector<Move> neighborhood(const Partition& p, const HardwareConfig& hw) {
    std::vector<Move> moves;
    for (std::uint32_t j = 0; j < p.boundaries.size(); ++j)
        for (MoveDirection dir : {MoveDirection::left, MoveDirection::right}) {
            const Move mv{j, dir};
            if (admissible(p, hw, mv)) moves.push_back(mv);
        }
    return moves;
}

ClimbResult climb(const SpikeGraph& g, const Partition& start, const HardwareConfig& hw,
                  const ClimbOptions& opts) {
    ensure_feasible(g, hw);
    if (const auto violations = validate(g, start, hw); !violations.empty())
        throw validation_error("climb: invalid start partition: " + violations.front().message);

    ClimbState st(g, hw, start);
    st.recompute();

    const std::uint32_t max_iters =
        opts.max_iters ? opts.max_iters : 10 * std::max<std::uint32_t>(g.num_neurons(), 1);

    ClimbResult res;
    res.trace.cost_sequence.push_back({st.max_load, st.inter});
    res.trace.terminated_by = ClimbTermination::local_minimum;

    for (;;) {
        const Objective current{st.max_load, st.inter};
        bool have_best = false;
        Move best_move{};
        Objective best_obj{};

        for (std::uint32_t j = 0; j < st.p.boundaries.size(); ++j)
            for (MoveDirection dir : {MoveDirection::left, MoveDirection::right}) {
                const Move mv{j, dir};
                if (!admissible(st.p, hw, mv)) continue;
                const Objective obj = st.after(st.transfer_of(mv));
                if (obj >= current) continue;
                if (!have_best || obj < best_obj) {
                    have_best = true;
                    best_move = mv;
                    best_obj = obj;
                }
            }

        if (!have_best) break;
        if (res.trace.iterations >= max_iters) {
            res.trace.terminated_by = ClimbTermination::iteration_cap;
            break;
        }
        st.apply(best_move, st.transfer_of(best_move), best_obj);
        ++res.trace.iterations;
        res.trace.cost_sequence.push_back(best_obj);
        if (opts.on_step) opts.on_step(st.p, st.report());
    }

    res.partition = std::move(st.p);
    res.report = st.report();
    return res;
}

ClimbResult hco_partition(const SpikeGraph& g, const HardwareConfig& hw,
                          const ClimbOptions& opts) {
    return climb(g, greedy_partition(g, hw), hw, opts);
}

} // namespace crossmap
