#include "crossmap/pso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "crossmap/errors.hpp"

namespace crossmap {

Assignment decode_position(std::span<const double> position, std::uint32_t num_clusters) {
    Assignment a(position.size(), 0);
    for (std::size_t i = 0; i < position.size(); ++i) {
        const double f = std::floor(position[i]);
        if (f <= 0.0)
            a[i] = 0;
        else if (f >= static_cast<double>(num_clusters))
            a[i] = num_clusters - 1;
        else
            a[i] = static_cast<std::uint32_t>(f);
    }
    return a;
}

namespace {

// 53-bit mantissa draw in [0, 1)
double unif01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct FlatSynapses {
    std::vector<std::uint32_t> srcs, dsts;
    std::vector<std::uint64_t> ws;

    // zero-spike synapses cannot contribute to the fitness, skip them
    explicit FlatSynapses(const SpikeGraph& g) {
        for (const Synapse& syn : g.synapses()) {
            if (syn.spikes == 0) continue;
            srcs.push_back(syn.src);
            dsts.push_back(syn.dst);
            ws.push_back(syn.spikes);
        }
    }
};

double fitness_of(const FlatSynapses& syn, const Assignment& a,
                  std::vector<std::uint32_t>& sizes, std::uint32_t k, double penalty) {
    std::fill(sizes.begin(), sizes.end(), 0u);
    for (std::uint32_t c : a) ++sizes[c];
    std::uint64_t over = 0;
    for (std::uint32_t sz : sizes)
        if (sz > k) over += sz - k;
    std::uint64_t inter = 0;
    for (std::size_t e = 0; e < syn.ws.size(); ++e)
        if (a[syn.srcs[e]] != a[syn.dsts[e]]) inter += syn.ws[e];
    return static_cast<double>(inter) + penalty * static_cast<double>(over);
}

// Move neurons out of over-full clusters, cheapest traffic increase
// first, until every cluster fits. Each move shrinks the total overflow
// by one neuron, so this terminates.
void repair(const SpikeGraph& g, Assignment& a, const HardwareConfig& hw) {
    const std::uint32_t s = hw.crossbar_count;
    const std::uint32_t k = hw.crossbar_size;
    std::vector<std::uint32_t> sizes(s, 0);
    for (std::uint32_t c : a) ++sizes[c];

    std::vector<std::int64_t> attach(s);
    for (;;) {
        bool any_over = false;
        for (std::uint32_t sz : sizes)
            if (sz > k) any_over = true;
        if (!any_over) return;

        bool have = false;
        std::int64_t best_delta = 0;
        std::uint32_t best_id = 0, best_t = 0;
        for (std::uint32_t id = 0; id < a.size(); ++id) {
            const std::uint32_t c = a[id];
            if (sizes[c] <= k) continue;
            std::fill(attach.begin(), attach.end(), 0);
            for (const Arc& arc : g.out_arcs(id))
                attach[a[arc.other]] += static_cast<std::int64_t>(arc.spikes);
            for (const Arc& arc : g.in_arcs(id))
                attach[a[arc.other]] += static_cast<std::int64_t>(arc.spikes);
            for (std::uint32_t t = 0; t < s; ++t) {
                if (t == c || sizes[t] >= k) continue;
                const std::int64_t delta = attach[c] - attach[t];
                if (!have || delta < best_delta) {
                    have = true;
                    best_delta = delta;
                    best_id = id;
                    best_t = t;
                }
            }
        }
        // n <= k*s, so an over-full cluster implies an under-full one
        --sizes[a[best_id]];
        ++sizes[best_t];
        a[best_id] = best_t;
    }
}

} // namespace

PsoResult pso_partition(const SpikeGraph& g, const HardwareConfig& hw, const PsoConfig& cfg) {
    ensure_feasible(g, hw);
    if (cfg.swarm_size < 2)
        throw validation_error("pso: swarm_size " + std::to_string(cfg.swarm_size) +
                               " below minimum 2");
    if (cfg.iterations < 1) throw validation_error("pso: iterations must be at least 1");

    const std::uint32_t n = g.num_neurons();
    const std::uint32_t s = hw.crossbar_count;
    const std::uint32_t swarm = cfg.swarm_size;
    const double smax = static_cast<double>(s);
    const double vmax = smax / 2.0;

    std::mt19937_64 rng(cfg.seed);
    const FlatSynapses syn(g);

    std::vector<double> pos(static_cast<std::size_t>(swarm) * n);
    std::vector<double> vel(pos.size());
    std::vector<double> pbest(pos.size());
    std::vector<double> pbest_fit(swarm, std::numeric_limits<double>::infinity());
    std::vector<double> gbest(n, 0.0);
    double gbest_fit = std::numeric_limits<double>::infinity();

    for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = unif01(rng) * smax;
    for (std::size_t i = 0; i < vel.size(); ++i) vel[i] = (unif01(rng) * 2.0 - 1.0) * vmax;

    PsoResult res;
    res.best_fitness_trace.reserve(cfg.iterations);
    std::vector<std::uint32_t> sizes(s, 0);

    for (std::uint32_t iter = 0; iter < cfg.iterations; ++iter) {
        for (std::uint32_t p = 0; p < swarm; ++p) {
            const std::span<const double> x(pos.data() + static_cast<std::size_t>(p) * n, n);
            const Assignment a = decode_position(x, s);
            const double fit = fitness_of(syn, a, sizes, hw.crossbar_size, cfg.capacity_penalty);
            ++res.fitness_evaluations;
            if (fit < pbest_fit[p]) {
                pbest_fit[p] = fit;
                std::copy(x.begin(), x.end(), pbest.begin() + static_cast<std::size_t>(p) * n);
            }
            if (fit < gbest_fit) {
                gbest_fit = fit;
                std::copy(x.begin(), x.end(), gbest.begin());
            }
        }
        res.best_fitness_trace.push_back(gbest_fit);

        for (std::uint32_t p = 0; p < swarm; ++p) {
            const std::size_t off = static_cast<std::size_t>(p) * n;
            for (std::uint32_t d = 0; d < n; ++d) {
                const double r1 = unif01(rng);
                const double r2 = unif01(rng);
                double v = cfg.inertia * vel[off + d] +
                           cfg.cognitive * r1 * (pbest[off + d] - pos[off + d]) +
                           cfg.social * r2 * (gbest[d] - pos[off + d]);
                v = std::clamp(v, -vmax, vmax);
                vel[off + d] = v;
                pos[off + d] = std::clamp(pos[off + d] + v, 0.0, smax);
            }
        }
    }

    res.gbest_fitness = gbest_fit;
    res.assignment = decode_position(gbest, s);
    repair(g, res.assignment, hw);
    res.report = max_cost(g, res.assignment, s);
    return res;
}

} // namespace crossmap
