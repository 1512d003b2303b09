#include "crossmap/partition.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "crossmap/errors.hpp"

namespace crossmap {

Assignment Partition::to_assignment() const {
    Assignment a(order.size(), 0);
    for (std::uint32_t c = 0; c < num_clusters(); ++c)
        for (std::uint32_t i = cluster_begin(c); i < cluster_end(c); ++i)
            a[order[i]] = c;
    return a;
}

std::string cost_report_csv(const CostReport& report) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%llu,%llu,%.6f",
                  static_cast<unsigned long long>(report.max_load),
                  static_cast<unsigned long long>(report.inter_cluster_spikes),
                  report.normalized_inter_cluster);
    return buf;
}

std::uint64_t cluster_load(const SpikeGraph& g, const Partition& p, std::uint32_t cluster) {
    if (cluster >= p.num_clusters())
        throw std::out_of_range("cluster_load: cluster " + std::to_string(cluster) +
                                " out of range (have " + std::to_string(p.num_clusters()) + ")");
    const Assignment a = p.to_assignment();
    std::uint64_t load = 0;
    for (std::uint32_t i = p.cluster_begin(cluster); i < p.cluster_end(cluster); ++i) {
        const std::uint32_t id = p.order[i];
        for (const Arc& arc : g.out_arcs(id))
            if (a[arc.other] != cluster) load += arc.spikes;
    }
    return load;
}

static CostReport cost_from_assignment(const SpikeGraph& g, const Assignment& a,
                                       std::uint32_t num_clusters) {
    CostReport r;
    r.cluster_loads.assign(num_clusters, 0);
    for (const Synapse& syn : g.synapses()) {
        if (a[syn.src] != a[syn.dst]) r.cluster_loads[a[syn.src]] += syn.spikes;
    }
    for (std::uint64_t load : r.cluster_loads) {
        r.max_load = std::max(r.max_load, load);
        r.inter_cluster_spikes += load;
    }
    r.normalized_inter_cluster =
        g.total_spikes() ? static_cast<double>(r.inter_cluster_spikes) /
                               static_cast<double>(g.total_spikes())
                         : 0.0;
    return r;
}

CostReport max_cost(const SpikeGraph& g, const Partition& p) {
    return cost_from_assignment(g, p.to_assignment(), p.num_clusters());
}

CostReport max_cost(const SpikeGraph& g, const Assignment& assignment,
                    std::uint32_t num_clusters) {
    if (assignment.size() != g.num_neurons())
        throw validation_error("max_cost: assignment covers " +
                               std::to_string(assignment.size()) + " neurons, graph has " +
                               std::to_string(g.num_neurons()));
    for (std::uint32_t id = 0; id < assignment.size(); ++id)
        if (assignment[id] >= num_clusters)
            throw validation_error("max_cost: neuron " + std::to_string(id) +
                                   " assigned to cluster " + std::to_string(assignment[id]) +
                                   ", only " + std::to_string(num_clusters) + " clusters");
    return cost_from_assignment(g, assignment, num_clusters);
}

double mean_load(const SpikeGraph& g, const HardwareConfig& hw) {
    if (hw.crossbar_count == 0)
        throw validation_error("mean_load: crossbar_count is zero");
    return static_cast<double>(g.total_spikes()) / static_cast<double>(hw.crossbar_count);
}

std::vector<Violation> validate(const SpikeGraph& g, const Partition& p,
                                const HardwareConfig& hw) {
    std::vector<Violation> out;
    const std::uint32_t n = g.num_neurons();

    if (p.num_clusters() > std::max<std::uint32_t>(hw.crossbar_count, 1))
        out.push_back({Violation::Kind::too_many_clusters,
                       "partition uses " + std::to_string(p.num_clusters()) +
                           " clusters, hardware has " + std::to_string(hw.crossbar_count)});

    std::uint32_t prev = 0;
    bool ordered = true;
    for (std::uint32_t b : p.boundaries) {
        if (b <= prev || b >= p.order.size()) {
            out.push_back({Violation::Kind::boundary_disorder,
                           "boundary " + std::to_string(b) +
                               " not strictly inside the previous cut and the order length"});
            ordered = false;
        }
        prev = b;
    }

    std::vector<char> seen(n, 0);
    std::uint32_t placed = 0;
    bool duplicates = false;
    for (std::uint32_t id : p.order) {
        if (id >= n || seen[id]) {
            out.push_back({Violation::Kind::duplicate_assignment,
                           "neuron " + std::to_string(id) +
                               " repeated or unknown in the order"});
            duplicates = true;
            continue;
        }
        seen[id] = 1;
        ++placed;
    }
    if (placed != n)
        for (std::uint32_t id = 0; id < n; ++id)
            if (!seen[id])
                out.push_back({Violation::Kind::missing_neuron,
                               "neuron " + std::to_string(id) + " not placed"});

    if (ordered && !duplicates && p.order.size() == n)
        for (std::uint32_t c = 0; c < p.num_clusters(); ++c)
            if (p.cluster_size(c) > hw.crossbar_size)
                out.push_back({Violation::Kind::capacity_exceeded,
                               "cluster " + std::to_string(c) + " holds " +
                                   std::to_string(p.cluster_size(c)) + " neurons, crossbar fits " +
                                   std::to_string(hw.crossbar_size)});
    return out;
}

std::vector<Violation> validate(const SpikeGraph& g, const Assignment& assignment,
                                const HardwareConfig& hw) {
    std::vector<Violation> out;
    const std::uint32_t n = g.num_neurons();

    if (assignment.size() != n) {
        out.push_back({Violation::Kind::missing_neuron,
                       "assignment covers " + std::to_string(assignment.size()) +
                           " neurons, graph has " + std::to_string(n)});
        return out;
    }

    std::vector<std::uint64_t> sizes(hw.crossbar_count, 0);
    for (std::uint32_t id = 0; id < n; ++id) {
        if (assignment[id] >= hw.crossbar_count) {
            out.push_back({Violation::Kind::cluster_out_of_range,
                           "neuron " + std::to_string(id) + " assigned to cluster " +
                               std::to_string(assignment[id]) + ", hardware has " +
                               std::to_string(hw.crossbar_count)});
            continue;
        }
        ++sizes[assignment[id]];
    }
    for (std::uint32_t c = 0; c < sizes.size(); ++c)
        if (sizes[c] > hw.crossbar_size)
            out.push_back({Violation::Kind::capacity_exceeded,
                           "cluster " + std::to_string(c) + " holds " + std::to_string(sizes[c]) +
                               " neurons, crossbar fits " + std::to_string(hw.crossbar_size)});
    return out;
}

void ensure_feasible(const SpikeGraph& g, const HardwareConfig& hw) {
    if (hw.crossbar_size == 0 || hw.crossbar_count == 0)
        throw validation_error("hardware config with zero crossbar size or count");
    const std::uint64_t capacity =
        static_cast<std::uint64_t>(hw.crossbar_size) * hw.crossbar_count;
    if (g.num_neurons() > capacity)
        throw infeasible_error("graph with " + std::to_string(g.num_neurons()) +
                               " neurons exceeds capacity " + std::to_string(capacity) + " (" +
                               std::to_string(hw.crossbar_size) + " x " +
                               std::to_string(hw.crossbar_count) + ")");
}

// ---- mapping file I/O ----------------------------------------------------

void write_mapping(const Mapping& m, std::ostream& out) {
    out << "snnmap v1 " << m.assignment.size() << ' ' << m.num_clusters << '\n';
    char buf[64];
    for (std::uint32_t id = 0; id < m.assignment.size(); ++id) {
        std::snprintf(buf, sizeof buf, "M %u %u\n", id, m.assignment[id]);
        out << buf;
    }
}

void save_mapping(const Mapping& m, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_mapping(m, out);
    out.flush();
    if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream ss(line);
    std::string f;
    while (ss >> f) fields.push_back(std::move(f));
    return fields;
}

std::uint32_t parse_u32(const std::string& s, const std::string& where) {
    if (!s.empty() && s[0] == '-')
        throw validation_error(where + ": negative value " + s);
    std::uint32_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw parse_error(where + ": bad integer '" + s + "'");
    return v;
}

} // namespace

Mapping read_mapping(std::istream& in, const std::string& origin) {
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    Mapping m;
    std::vector<char> seen;

    auto at = [&] { return origin + ":" + std::to_string(lineno); };

    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        const auto fields = split_ws(line);
        if (fields.empty()) continue;

        if (!have_header) {
            if (fields.size() != 4 || fields[0] != "snnmap")
                throw parse_error(at() + ": expected header 'snnmap v1 <n> <s>'");
            if (fields[1] != "v1")
                throw parse_error(at() + ": unsupported version '" + fields[1] + "'");
            const std::uint32_t n = parse_u32(fields[2], at());
            m.num_clusters = parse_u32(fields[3], at());
            m.assignment.assign(n, 0);
            seen.assign(n, 0);
            have_header = true;
            continue;
        }
        if (fields[0] != "M" || fields.size() != 3)
            throw parse_error(at() + ": expected 'M <neuron> <cluster>'");
        const std::uint32_t id = parse_u32(fields[1], at());
        const std::uint32_t cluster = parse_u32(fields[2], at());
        if (id >= m.assignment.size())
            throw validation_error(at() + ": neuron " + std::to_string(id) +
                                   " outside declared count " +
                                   std::to_string(m.assignment.size()));
        if (seen[id])
            throw validation_error(at() + ": neuron " + std::to_string(id) + " mapped twice");
        if (cluster >= m.num_clusters)
            throw validation_error(at() + ": cluster " + std::to_string(cluster) +
                                   " outside declared count " + std::to_string(m.num_clusters));
        seen[id] = 1;
        m.assignment[id] = cluster;
    }
    if (!have_header) throw parse_error(origin + ": missing snnmap header");
    for (std::uint32_t id = 0; id < seen.size(); ++id)
        if (!seen[id])
            throw validation_error(origin + ": neuron " + std::to_string(id) + " never mapped");
    return m;
}

Mapping load_mapping(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open mapping file " + path.string());
    return read_mapping(in, path.string());
}

} // namespace crossmap
