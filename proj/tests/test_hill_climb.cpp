#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "crossmap/errors.hpp"
#include "crossmap/graph.hpp"
#include "crossmap/greedy.hpp"
#include "crossmap/hill_climb.hpp"
#include "crossmap/oracle.hpp"
#include "testutil.hpp"

using namespace crossmap;

namespace {

SpikeGraph path(std::vector<std::uint64_t> weights) {
    std::vector<Neuron> neurons;
    std::vector<Synapse> synapses;
    for (std::uint32_t i = 0; i <= weights.size(); ++i) neurons.push_back({i, i});
    for (std::uint32_t i = 0; i < weights.size(); ++i)
        synapses.push_back({i, i + 1, weights[i]});
    return SpikeGraph(std::move(neurons), std::move(synapses));
}

} // namespace

TEST_CASE("neighborhood lists only admissible shifts") {
    const SpikeGraph g = path({1, 1, 1, 1, 1});
    Partition p;
    p.order = {0, 1, 2, 3, 4, 5};

    SUBCASE("both clusters full leaves nothing to move") {
        p.boundaries = {3};
        CHECK(neighborhood(p, {3, 2}).empty());
    }
    SUBCASE("slack on both sides allows every shift") {
        p.boundaries = {2, 4};
        const auto moves = neighborhood(p, {3, 3});
        REQUIRE(moves.size() == 4);
        CHECK(moves[0] == Move{0, MoveDirection::left});
        CHECK(moves[1] == Move{0, MoveDirection::right});
        CHECK(moves[2] == Move{1, MoveDirection::left});
        CHECK(moves[3] == Move{1, MoveDirection::right});
    }
    SUBCASE("a move may not empty a cluster") {
        p.boundaries = {1, 4};
        const auto moves = neighborhood(p, {6, 3});
        for (const Move& mv : moves)
            CHECK_FALSE(mv == Move{0, MoveDirection::left}); // cluster 0 has one neuron
    }
    SUBCASE("a move may not overfill the receiving cluster") {
        p.boundaries = {2};
        const auto moves = neighborhood(p, {4, 2});
        // cluster 1 already sits at the crossbar limit, so only the move
        // into cluster 0 fits
        REQUIRE(moves.size() == 1);
        CHECK(moves[0] == Move{0, MoveDirection::right});
    }
}

TEST_CASE("neighborhood size never exceeds twice the inner boundaries") {
    std::mt19937_64 rng(41);
    for (int round = 0; round < 60; ++round) {
        const SpikeGraph g = testutil::random_graph(rng, 30, 80);
        const HardwareConfig hw = testutil::random_hw(rng, g.num_neurons(), 8);
        const Partition p = testutil::random_partition(rng, g, hw);
        CHECK(neighborhood(p, hw).size() <= 2 * p.boundaries.size());
    }
}

TEST_CASE("climb walks a misplaced boundary off a heavy edge") {
    // greedy's early cut lands in the middle of the 10-weight edge; one
    // left shift fixes it
    const SpikeGraph g = path({1, 10, 1});
    const ClimbResult r = hco_partition(g, {3, 2});
    CHECK(r.partition.boundaries == std::vector<std::uint32_t>{1});
    CHECK(r.report.objective() == Objective{1, 1});
    CHECK(r.trace.iterations == 1);
    REQUIRE(r.trace.cost_sequence.size() == 2);
    CHECK(r.trace.cost_sequence[0] == Objective{10, 10});
    CHECK(r.trace.cost_sequence[1] == Objective{1, 1});
    CHECK(r.trace.terminated_by == ClimbTermination::local_minimum);
}

TEST_CASE("objective sequence strictly decreases and ends at a local minimum") {
    std::mt19937_64 rng(42);
    for (int round = 0; round < 80; ++round) {
        const SpikeGraph g = testutil::random_graph(rng, 36, 150, 20);
        const HardwareConfig hw = testutil::random_hw(rng, g.num_neurons(), 9);
        const Partition start = testutil::random_partition(rng, g, hw);
        const ClimbResult r = climb(g, start, hw);

        CHECK(validate(g, r.partition, hw).empty());
        REQUIRE(r.trace.cost_sequence.size() == r.trace.iterations + 1);
        for (std::size_t i = 1; i < r.trace.cost_sequence.size(); ++i)
            CHECK(r.trace.cost_sequence[i] < r.trace.cost_sequence[i - 1]);
        CHECK(r.trace.cost_sequence.front() == max_cost(g, start).objective());
        CHECK(r.trace.cost_sequence.back() == r.report.objective());
        CHECK(r.report.objective() == max_cost(g, r.partition).objective());

        if (r.trace.terminated_by == ClimbTermination::local_minimum) {
            const Objective final = r.report.objective();
            for (const Move& mv : neighborhood(r.partition, hw)) {
                Partition q = r.partition;
                if (mv.direction == MoveDirection::left)
                    q.boundaries[mv.boundary_index] -= 1;
                else
                    q.boundaries[mv.boundary_index] += 1;
                CHECK(max_cost(g, q).objective() >= final);
            }
        }
    }
}

TEST_CASE("every accepted step matches a from-scratch recount") {
    std::mt19937_64 rng(43);
    for (int round = 0; round < 40; ++round) {
        const SpikeGraph g = testutil::random_graph(rng, 30, 120, 15);
        const HardwareConfig hw = testutil::random_hw(rng, g.num_neurons(), 7);
        ClimbOptions opts;
        std::uint32_t steps = 0;
        opts.on_step = [&](const Partition& p, const CostReport& rep) {
            ++steps;
            CHECK(validate(g, p, hw).empty());
            const CostReport fresh = recount_cost(g, p.to_assignment(), p.num_clusters());
            CHECK(fresh.cluster_loads == rep.cluster_loads);
            CHECK(fresh.max_load == rep.max_load);
            CHECK(fresh.inter_cluster_spikes == rep.inter_cluster_spikes);
        };
        const ClimbResult r = hco_partition(g, hw, opts);
        CHECK(steps == r.trace.iterations);
    }
}

TEST_CASE("iteration cap stops an unfinished climb") {
    // geometric weights make the boundary walk left one step at a time:
    // the full descent takes three accepted moves
    const SpikeGraph g = path({1, 2, 4, 8});
    const HardwareConfig hw{4, 2};
    const Partition start = greedy_partition(g, hw);
    REQUIRE(start.boundaries == std::vector<std::uint32_t>{4});

    ClimbOptions opts;
    opts.max_iters = 1;
    const ClimbResult capped = climb(g, start, hw, opts);
    CHECK(capped.trace.iterations == 1);
    CHECK(capped.trace.terminated_by == ClimbTermination::iteration_cap);
    CHECK(capped.partition.boundaries == std::vector<std::uint32_t>{3});

    const ClimbResult full = climb(g, start, hw);
    CHECK(full.trace.iterations == 3);
    CHECK(full.partition.boundaries == std::vector<std::uint32_t>{1});
    CHECK(full.report.objective() == Objective{1, 1});
}

TEST_CASE("climb refuses an invalid start") {
    const SpikeGraph g = path({1, 1, 1});
    Partition broken;
    broken.order = {0, 1, 2, 3};
    broken.boundaries = {3};
    CHECK_THROWS_AS(climb(g, broken, {2, 2}, {}), validation_error);
}

TEST_CASE("refinement never loses to its greedy start") {
    std::mt19937_64 rng(44);
    for (int round = 0; round < 80; ++round) {
        const SpikeGraph g = testutil::random_graph(rng, 40, 160, 25);
        const HardwareConfig hw = testutil::random_hw(rng, g.num_neurons(), 10);
        const Partition seed = greedy_partition(g, hw);
        const ClimbResult r = hco_partition(g, hw);
        CHECK(r.report.objective() <= max_cost(g, seed).objective());
    }
}
