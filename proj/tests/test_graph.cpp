#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <sstream>

#include "crossmap/errors.hpp"
#include "crossmap/graph.hpp"
#include "testutil.hpp"

using namespace crossmap;

namespace {

SpikeGraph tiny() {
    // two layers, one duplicate synapse that must merge
    std::vector<Neuron> neurons{{2, 1}, {0, 0}, {1, 0}, {3, 1}};
    std::vector<Synapse> synapses{{0, 2, 5}, {1, 2, 3}, {0, 3, 2}, {0, 2, 2}};
    return SpikeGraph(std::move(neurons), std::move(synapses));
}

} // namespace

TEST_CASE("construction canonicalizes neurons and merges duplicate synapses") {
    const SpikeGraph g = tiny();
    REQUIRE(g.num_neurons() == 4);
    CHECK(g.num_synapses() == 3); // 0->2 appears twice
    CHECK(g.total_spikes() == 12);
    CHECK(g.layer_of(0) == 0);
    CHECK(g.layer_of(2) == 1);

    // canonical order sorts by (layer, id)
    const auto order = g.canonical_order();
    CHECK(std::vector<std::uint32_t>(order.begin(), order.end()) ==
          std::vector<std::uint32_t>{0, 1, 2, 3});
    for (std::uint32_t pos = 0; pos < 4; ++pos) CHECK(g.canonical_pos(order[pos]) == pos);

    // synapses sorted by (src, dst), duplicate summed
    CHECK(g.synapses()[0] == Synapse{0, 2, 7});
    CHECK(g.synapses()[1] == Synapse{0, 3, 2});
    CHECK(g.synapses()[2] == Synapse{1, 2, 3});
}

TEST_CASE("construction rejects malformed graphs and names the offender") {
    CHECK_THROWS_AS(SpikeGraph({{0, 0}, {0, 0}}, {}), validation_error);
    CHECK_THROWS_AS(SpikeGraph({{0, 0}, {5, 0}}, {}), validation_error);
    CHECK_THROWS_AS(SpikeGraph({{0, 0}, {1, 0}}, {{0, 9, 1}}), validation_error);
    CHECK_THROWS_WITH_AS(SpikeGraph({{0, 0}, {1, 0}}, {{0, 9, 1}}),
                         doctest::Contains("9"), validation_error);
    CHECK_THROWS_AS(SpikeGraph({{0, 0}, {1, 0}}, {{1, 1, 2}}), validation_error);
}

TEST_CASE("adjacency mirrors the synapse list") {
    std::mt19937_64 rng(21);
    for (int round = 0; round < 40; ++round) {
        const SpikeGraph g = testutil::random_graph(rng, 30, 120);
        std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> expect;
        for (const Synapse& syn : g.synapses()) expect[{syn.src, syn.dst}] = syn.spikes;

        std::size_t out_count = 0, in_count = 0;
        for (std::uint32_t id = 0; id < g.num_neurons(); ++id) {
            for (const Arc& arc : g.out_arcs(id)) {
                ++out_count;
                REQUIRE(expect.count({id, arc.other}) == 1);
                CHECK(expect[{id, arc.other}] == arc.spikes);
            }
            for (const Arc& arc : g.in_arcs(id)) {
                ++in_count;
                REQUIRE(expect.count({arc.other, id}) == 1);
                CHECK(expect[{arc.other, id}] == arc.spikes);
            }
        }
        CHECK(out_count == g.num_synapses());
        CHECK(in_count == g.num_synapses());
    }
}

TEST_CASE("feedforward generator is deterministic and layer-major") {
    TopologySpec spec;
    spec.layer_sizes = {7, 5, 3};
    spec.seed = 42;
    const SpikeGraph a = generate_feedforward(spec);
    const SpikeGraph b = generate_feedforward(spec);
    CHECK(a == b);

    spec.seed = 43;
    const SpikeGraph c = generate_feedforward(spec);
    CHECK_FALSE(a == c);

    CHECK(a.num_neurons() == 15);
    CHECK(a.num_synapses() == 7 * 5 + 5 * 3);
    for (std::uint32_t id = 1; id < a.num_neurons(); ++id)
        CHECK(a.layer_of(id - 1) <= a.layer_of(id));
    for (const Synapse& syn : a.synapses()) {
        CHECK(a.layer_of(syn.dst) == a.layer_of(syn.src) + 1);
        CHECK(syn.spikes >= spec.spikes_lo);
        CHECK(syn.spikes <= spec.spikes_hi);
    }
}

TEST_CASE("generator synapse counts for the reference topologies") {
    TopologySpec spec;
    spec.layer_sizes = {784, 100, 10};
    CHECK(generate_feedforward(spec).num_synapses() == 79'400);
    spec.layer_sizes = {400, 400, 100};
    CHECK(generate_feedforward(spec).num_synapses() == 200'000);
    spec.layer_sizes = {800, 400, 800};
    CHECK(generate_feedforward(spec).num_synapses() == 640'000);
}

TEST_CASE("generator rejects bad topologies") {
    TopologySpec spec;
    spec.layer_sizes = {4};
    CHECK_THROWS_AS(generate_feedforward(spec), validation_error);
    spec.layer_sizes = {4, 0, 2};
    CHECK_THROWS_AS(generate_feedforward(spec), validation_error);
    spec.layer_sizes = {4, 2};
    spec.spikes_lo = 9;
    spec.spikes_hi = 3;
    CHECK_THROWS_AS(generate_feedforward(spec), validation_error);
}

TEST_CASE("rescale hits the requested total exactly") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 30; ++round) {
        const SpikeGraph g = testutil::random_graph(rng, 25, 90, 40);
        if (g.total_spikes() == 0) continue;
        const std::uint64_t target = testutil::pick(rng, 0, 3 * g.total_spikes());
        const SpikeGraph r = rescale_total_spikes(g, target);
        CHECK(r.total_spikes() == target);
        REQUIRE(r.num_synapses() == g.num_synapses());

        // every synapse lands on floor or ceiling of its exact share
        for (std::size_t i = 0; i < g.num_synapses(); ++i) {
            const unsigned __int128 quota =
                static_cast<unsigned __int128>(g.synapses()[i].spikes) * target;
            const std::uint64_t lo =
                static_cast<std::uint64_t>(quota / g.total_spikes());
            const std::uint64_t got = r.synapses()[i].spikes;
            CHECK(got >= lo);
            CHECK(got <= lo + 1);
        }
    }
}

TEST_CASE("rescale reference totals") {
    TopologySpec spec;
    spec.layer_sizes = {400, 400, 100};
    spec.seed = 1;
    const SpikeGraph g = generate_feedforward(spec);
    CHECK(rescale_total_spikes(g, 5'948'200).total_spikes() == 5'948'200);
    CHECK(rescale_total_spikes(g, 45'807'200).total_spikes() == 45'807'200);
    // targets far below the synapse count zero out most synapses but the
    // total still lands exactly
    CHECK(rescale_total_spikes(g, 22'780).total_spikes() == 22'780);
    CHECK(rescale_total_spikes(g, 0).total_spikes() == 0);
}

TEST_CASE("rescale of an all-zero graph") {
    const SpikeGraph g({{0, 0}, {1, 1}}, {{0, 1, 0}});
    CHECK(rescale_total_spikes(g, 0).total_spikes() == 0);
    CHECK_THROWS_AS(rescale_total_spikes(g, 5), validation_error);
}

TEST_CASE("serialization round trip is byte stable") {
    std::mt19937_64 rng(99);
    for (int round = 0; round < 40; ++round) {
        const SpikeGraph g = testutil::random_graph(rng, 40, 150);
        std::ostringstream first;
        write_graph(g, first);
        std::istringstream in(first.str());
        const SpikeGraph back = read_graph(in, "round");
        CHECK(g == back);
        std::ostringstream second;
        write_graph(back, second);
        CHECK(first.str() == second.str());
    }
}

TEST_CASE("serialized form is the documented text format") {
    const SpikeGraph g = tiny();
    std::ostringstream out;
    write_graph(g, out);
    CHECK(out.str() == "snngraph v1 4 3\n"
                       "N 0 0\n"
                       "N 1 0\n"
                       "N 2 1\n"
                       "N 3 1\n"
                       "S 0 2 7\n"
                       "S 0 3 2\n"
                       "S 1 2 3\n");
}

TEST_CASE("reader accepts comments and blank lines") {
    std::istringstream in("# header comment\n"
                          "snngraph v1 2 1   # trailing\n"
                          "\n"
                          "N 0 0\n"
                          "N 1 0\n"
                          "S 0 1 4\n");
    const SpikeGraph g = read_graph(in, "t");
    CHECK(g.num_neurons() == 2);
    CHECK(g.total_spikes() == 4);
}

TEST_CASE("reader rejects malformed input with the line number") {
    auto bad = [](const std::string& text) {
        std::istringstream in(text);
        return read_graph(in, "t");
    };
    CHECK_THROWS_AS(bad(""), parse_error);
    CHECK_THROWS_AS(bad("snngraph v2 1 0\nN 0 0\n"), parse_error);
    CHECK_THROWS_AS(bad("snngraph v1 2 0\nN 0 0\n"), parse_error);       // neuron count short
    CHECK_THROWS_AS(bad("snngraph v1 1 1\nN 0 0\n"), parse_error);       // synapse count short
    CHECK_THROWS_AS(bad("snngraph v1 1 0\nN 0 0\nN 1 0\n"), parse_error); // extra neuron
    CHECK_THROWS_AS(bad("snngraph v1 1 0\nN x 0\n"), parse_error);
    CHECK_THROWS_WITH_AS(bad("snngraph v1 2 1\nN 0 0\nN 1 0\nS 0 1 -4\n"),
                         doctest::Contains(":4"), validation_error);
    CHECK_THROWS_AS(bad("snngraph v1 2 1\nN 0 0\nN 1 0\nS 0 5 1\n"), validation_error);
}

TEST_CASE("file round trip through the filesystem") {
    const auto dir = std::filesystem::temp_directory_path() / "crossmap_graph_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "g.snn";

    TopologySpec spec;
    spec.layer_sizes = {30, 20, 10};
    spec.seed = 5;
    const SpikeGraph g = generate_feedforward(spec);
    save_graph(g, path);
    CHECK(load_graph(path) == g);
    std::filesystem::remove_all(dir);
    CHECK_THROWS(load_graph(path));
}

TEST_CASE("million-synapse graph survives a round trip") {
    TopologySpec spec;
    spec.layer_sizes = {700, 1000, 300};
    spec.seed = 3;
    const SpikeGraph g = generate_feedforward(spec);
    REQUIRE(g.num_synapses() == 1'000'000);

    std::ostringstream out;
    write_graph(g, out);
    std::istringstream in(out.str());
    CHECK(read_graph(in, "big") == g);
}
