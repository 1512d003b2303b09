#include "crossmap/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace crossmap {

SpikeGraph::SpikeGraph(std::vector<Neuron> neurons, std::vector<Synapse> synapses)
    : neurons_(std::move(neurons)), synapses_(std::move(synapses)) {
    const std::size_t n = neurons_.size();
    if (n > std::numeric_limits<std::uint32_t>::max()) {
        throw validation_error("graph has too many neurons");
    }

    // Ids must be unique and dense in [0, n).
    std::vector<std::uint8_t> seen(n, 0);
    for (const Neuron& nr : neurons_) {
        if (nr.id >= n) {
            throw validation_error("neuron id " + std::to_string(nr.id) +
                                   " outside the dense range [0, " + std::to_string(n) + ")");
        }
        if (seen[nr.id]) {
            throw validation_error("duplicate neuron id " + std::to_string(nr.id));
        }
        seen[nr.id] = 1;
    }

    // Canonical layer-wise order.
    std::sort(neurons_.begin(), neurons_.end(), [](const Neuron& a, const Neuron& b) {
        return a.layer != b.layer ? a.layer < b.layer : a.id < b.id;
    });
    layer_.resize(n);
    order_.resize(n);
    pos_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Neuron& nr = neurons_[i];
        layer_[nr.id] = nr.layer;
        order_[i] = nr.id;
        pos_[nr.id] = static_cast<std::uint32_t>(i);
    }

    for (const Synapse& syn : synapses_) {
        if (syn.src >= n) {
            throw validation_error("synapse references unknown neuron " + std::to_string(syn.src));
        }
        if (syn.dst >= n) {
            throw validation_error("synapse references unknown neuron " + std::to_string(syn.dst));
        }
        if (syn.src == syn.dst) {
            throw validation_error("self-loop on neuron " + std::to_string(syn.src));
        }
    }

    // Sort by (src, dst) and merge duplicate pairs by summing spike counts.
    std::sort(synapses_.begin(), synapses_.end(), [](const Synapse& a, const Synapse& b) {
        return a.src != b.src ? a.src < b.src : a.dst < b.dst;
    });
    std::size_t w = 0;
    for (std::size_t r = 0; r < synapses_.size(); ++r) {
        if (w > 0 && synapses_[w - 1].src == synapses_[r].src &&
            synapses_[w - 1].dst == synapses_[r].dst) {
            synapses_[w - 1].spikes += synapses_[r].spikes;
        } else {
            synapses_[w++] = synapses_[r];
        }
    }
    synapses_.resize(w);

    total_spikes_ = 0;
    for (const Synapse& syn : synapses_) {
        total_spikes_ += syn.spikes;
    }

    // CSR adjacency, both directions.
    out_offsets_.assign(n + 1, 0);
    in_offsets_.assign(n + 1, 0);
    for (const Synapse& syn : synapses_) {
        ++out_offsets_[syn.src + 1];
        ++in_offsets_[syn.dst + 1];
    }
    std::partial_sum(out_offsets_.begin(), out_offsets_.end(), out_offsets_.begin());
    std::partial_sum(in_offsets_.begin(), in_offsets_.end(), in_offsets_.begin());
    out_arcs_.resize(synapses_.size());
    in_arcs_.resize(synapses_.size());
    std::vector<std::size_t> out_fill(out_offsets_.begin(), out_offsets_.end() - 1);
    std::vector<std::size_t> in_fill(in_offsets_.begin(), in_offsets_.end() - 1);
    for (const Synapse& syn : synapses_) {
        out_arcs_[out_fill[syn.src]++] = {syn.dst, syn.spikes};
        in_arcs_[in_fill[syn.dst]++] = {syn.src, syn.spikes};
    }
}

namespace {

// Exactly uniform in [lo, hi], deterministic for a given engine state.
std::uint64_t uniform_u64(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo + 1;
    if (span == 0) {
        return rng(); // full 64-bit range
    }
    const std::uint64_t reject_below = (0 - span) % span; // 2^64 mod span
    std::uint64_t u = rng();
    while (u < reject_below) {
        u = rng();
    }
    return lo + u % span;
}

void check_topology(const TopologySpec& spec) {
    if (spec.layer_sizes.size() < 2) {
        throw validation_error("topology needs at least 2 layers");
    }
    for (std::uint32_t sz : spec.layer_sizes) {
        if (sz == 0) {
            throw validation_error("every layer size must be >= 1");
        }
    }
    if (spec.spikes_lo > spec.spikes_hi) {
        throw validation_error("spike range is empty (lo > hi)");
    }
}

} // namespace

SpikeGraph generate_feedforward(const TopologySpec& spec) {
    check_topology(spec);

    std::uint64_t n = 0;
    std::uint64_t m = 0;
    for (std::size_t l = 0; l < spec.layer_sizes.size(); ++l) {
        n += spec.layer_sizes[l];
        if (l + 1 < spec.layer_sizes.size()) {
            m += static_cast<std::uint64_t>(spec.layer_sizes[l]) * spec.layer_sizes[l + 1];
        }
    }
    if (n > std::numeric_limits<std::uint32_t>::max()) {
        throw validation_error("topology has too many neurons");
    }

    std::vector<Neuron> neurons;
    neurons.reserve(n);
    std::uint32_t next_id = 0;
    for (std::size_t l = 0; l < spec.layer_sizes.size(); ++l) {
        for (std::uint32_t i = 0; i < spec.layer_sizes[l]; ++i) {
            neurons.push_back({next_id++, static_cast<std::uint32_t>(l)});
        }
    }

    std::mt19937_64 rng(spec.seed);
    std::vector<Synapse> synapses;
    synapses.reserve(m);
    std::uint32_t layer_base = 0;
    for (std::size_t l = 0; l + 1 < spec.layer_sizes.size(); ++l) {
        const std::uint32_t next_base = layer_base + spec.layer_sizes[l];
        for (std::uint32_t u = layer_base; u < next_base; ++u) {
            for (std::uint32_t v = next_base; v < next_base + spec.layer_sizes[l + 1]; ++v) {
                synapses.push_back({u, v, uniform_u64(rng, spec.spikes_lo, spec.spikes_hi)});
            }
        }
        layer_base = next_base;
    }

    return SpikeGraph(std::move(neurons), std::move(synapses));
}

SpikeGraph rescale_total_spikes(const SpikeGraph& g, std::uint64_t target_total) {
    const std::uint64_t current = g.total_spikes();
    if (current == target_total) {
        return g;
    }
    if (current == 0) {
        throw validation_error("cannot rescale a graph with zero total spikes to a nonzero total");
    }

    std::vector<Synapse> scaled = g.synapses();
    // floor(w * target / current) per synapse, then distribute the deficit
    // to the largest remainders (ties: lower synapse index first).
    std::uint64_t assigned = 0;
    std::vector<std::pair<std::uint64_t, std::size_t>> remainders;
    remainders.reserve(scaled.size());
    for (std::size_t i = 0; i < scaled.size(); ++i) {
        const unsigned __int128 prod =
            static_cast<unsigned __int128>(scaled[i].spikes) * target_total;
        scaled[i].spikes = static_cast<std::uint64_t>(prod / current);
        assigned += scaled[i].spikes;
        remainders.emplace_back(static_cast<std::uint64_t>(prod % current), i);
    }
    std::uint64_t deficit = target_total - assigned;
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    for (std::size_t j = 0; deficit > 0 && j < remainders.size(); ++j, --deficit) {
        ++scaled[remainders[j].second].spikes;
    }

    return SpikeGraph(g.neurons(), std::move(scaled));
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) fields.push_back(line.substr(i, j - i));
        i = j;
    }
    return fields;
}

template <typename T>
T parse_uint(std::string_view tok, const std::string& origin, std::size_t lineno,
             const char* what) {
    if (!tok.empty() && tok.front() == '-') {
        throw validation_error(origin + ":" + std::to_string(lineno) + ": negative " + what +
                               " '" + std::string(tok) + "'");
    }
    T value{};
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw parse_error(origin + ":" + std::to_string(lineno) + ": bad " + what + " '" +
                          std::string(tok) + "'");
    }
    return value;
}

bool is_blank_or_comment(std::string_view line) {
    for (char c : line) {
        if (c == '#') return true;
        if (c != ' ' && c != '\t' && c != '\r') return false;
    }
    return true;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

} // namespace

SpikeGraph read_graph(std::istream& in, const std::string& origin) {
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    std::uint64_t want_neurons = 0;
    std::uint64_t want_synapses = 0;
    std::vector<Neuron> neurons;
    std::vector<Synapse> synapses;

    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        if (is_blank_or_comment(line)) continue;
        const auto fields = split_fields(line);

        if (!header_seen) {
            if (fields.size() != 4 || fields[0] != "snngraph") {
                throw parse_error(origin + ":" + std::to_string(lineno) +
                                  ": expected header 'snngraph v1 <n> <m>'");
            }
            if (fields[1] != "v1") {
                throw parse_error(origin + ":" + std::to_string(lineno) +
                                  ": unsupported format version '" + std::string(fields[1]) + "'");
            }
            want_neurons = parse_uint<std::uint64_t>(fields[2], origin, lineno, "neuron count");
            want_synapses = parse_uint<std::uint64_t>(fields[3], origin, lineno, "synapse count");
            neurons.reserve(want_neurons);
            synapses.reserve(want_synapses);
            header_seen = true;
            continue;
        }

        if (fields[0] == "N") {
            if (fields.size() != 3) {
                throw parse_error(origin + ":" + std::to_string(lineno) +
                                  ": neuron record needs 'N <id> <layer>'");
            }
            neurons.push_back({parse_uint<std::uint32_t>(fields[1], origin, lineno, "neuron id"),
                               parse_uint<std::uint32_t>(fields[2], origin, lineno, "layer")});
        } else if (fields[0] == "S") {
            if (fields.size() != 4) {
                throw parse_error(origin + ":" + std::to_string(lineno) +
                                  ": synapse record needs 'S <src> <dst> <spikes>'");
            }
            synapses.push_back(
                {parse_uint<std::uint32_t>(fields[1], origin, lineno, "neuron id"),
                 parse_uint<std::uint32_t>(fields[2], origin, lineno, "neuron id"),
                 parse_uint<std::uint64_t>(fields[3], origin, lineno, "spike count")});
        } else {
            throw parse_error(origin + ":" + std::to_string(lineno) + ": unknown record type '" +
                              std::string(fields[0]) + "'");
        }
    }

    if (!header_seen) {
        throw parse_error(origin + ": missing 'snngraph v1' header");
    }
    if (neurons.size() != want_neurons) {
        throw parse_error(origin + ": header announces " + std::to_string(want_neurons) +
                          " neurons, file has " + std::to_string(neurons.size()));
    }
    if (synapses.size() != want_synapses) {
        throw parse_error(origin + ": header announces " + std::to_string(want_synapses) +
                          " synapses, file has " + std::to_string(synapses.size()));
    }
    return SpikeGraph(std::move(neurons), std::move(synapses));
}

SpikeGraph load_graph(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw parse_error("cannot open graph file " + path.string());
    }
    return read_graph(in, path.string());
}

void write_graph(const SpikeGraph& g, std::ostream& out) {
    char buf[96];
    int len = std::snprintf(buf, sizeof buf, "snngraph v1 %u %zu\n", g.num_neurons(),
                            g.num_synapses());
    out.write(buf, len);
    for (const Neuron& nr : g.neurons()) {
        len = std::snprintf(buf, sizeof buf, "N %u %u\n", nr.id, nr.layer);
        out.write(buf, len);
    }
    for (const Synapse& syn : g.synapses()) {
        len = std::snprintf(buf, sizeof buf, "S %u %u %llu\n", syn.src, syn.dst,
                            static_cast<unsigned long long>(syn.spikes));
        out.write(buf, len);
    }
}

void save_graph(const SpikeGraph& g, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write graph file " + path.string());
    }
    write_graph(g, out);
    out.flush();
    if (!out) {
        throw std::runtime_error("I/O failure writing graph file " + path.string());
    }
}

} // namespace crossmap
