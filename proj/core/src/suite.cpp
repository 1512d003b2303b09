#include "crossmap/suite.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <set>
#include <sstream>

#include "crossmap/errors.hpp"

namespace crossmap {

namespace {

struct Scalar {
    enum class Type { integer, real, string } type = Type::integer;
    std::uint64_t i = 0;
    double d = 0.0;
    std::string s;
};

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

class SuiteParser {
public:
    SuiteParser(std::istream& in, std::filesystem::path base_dir, std::string origin)
        : in_(in), base_dir_(std::move(base_dir)), origin_(std::move(origin)) {}

    Suite run() {
        std::string raw;
        while (std::getline(in_, raw)) {
            ++lineno_;
            const std::string line = trim(strip_comment(raw));
            if (line.empty()) continue;
            if (line.front() == '[')
                open_section(line);
            else
                key_value(line);
        }
        finish_workload();
        check();
        return std::move(suite_);
    }

private:
    enum class Section { none, defaults, workload };

    std::istream& in_;
    std::filesystem::path base_dir_;
    std::string origin_;
    std::size_t lineno_ = 0;
    Section section_ = Section::none;
    bool saw_defaults_ = false;
    Suite suite_;
    std::optional<SuiteWorkload> current_;

    [[noreturn]] void fail(const std::string& msg) const {
        throw parse_error(origin_ + ":" + std::to_string(lineno_) + ": " + msg);
    }

    std::string strip_comment(const std::string& line) const {
        bool in_string = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_string = !in_string;
            if (line[i] == '#' && !in_string) return line.substr(0, i);
        }
        if (in_string) fail("unterminated string");
        return line;
    }

    void open_section(const std::string& line) {
        if (line == "[defaults]") {
            if (saw_defaults_) fail("duplicate [defaults] table");
            saw_defaults_ = true;
            finish_workload();
            section_ = Section::defaults;
            return;
        }
        if (line == "[[workload]]") {
            finish_workload();
            current_.emplace();
            section_ = Section::workload;
            return;
        }
        fail("unknown table " + line + " (expected [defaults] or [[workload]])");
    }

    void finish_workload() {
        if (!current_) return;
        if (current_->name.empty()) fail("workload without a name");
        if (current_->layers.empty() == current_->file.empty())
            fail("workload '" + current_->name + "' needs exactly one of layers or file");
        if (current_->spikes_lo > current_->spikes_hi)
            fail("workload '" + current_->name + "': spikes_lo exceeds spikes_hi");
        suite_.workloads.push_back(std::move(*current_));
        current_.reset();
    }

    void check() const {
        if (suite_.workloads.empty())
            throw validation_error(origin_ + ": suite has no workloads");
        std::set<std::string> names;
        for (const SuiteWorkload& w : suite_.workloads)
            if (!names.insert(w.name).second)
                throw validation_error(origin_ + ": duplicate workload name '" + w.name + "'");
        if (suite_.defaults.seeds.empty())
            throw validation_error(origin_ + ": empty seeds list");
        if (suite_.defaults.algos.empty())
            throw validation_error(origin_ + ": empty algos list");
    }

    // ---- values ----------------------------------------------------------

    Scalar scalar(const std::string& text) const {
        if (text.empty()) fail("empty value");
        Scalar v;
        if (text.front() == '"') {
            if (text.size() < 2 || text.back() != '"') fail("unterminated string " + text);
            v.s = text.substr(1, text.size() - 2);
            if (v.s.find('"') != std::string::npos) fail("embedded quote in " + text);
            v.type = Scalar::Type::string;
            return v;
        }
        if (text.front() == '-') fail("negative value " + text);
        if (text.find_first_of(".eE") != std::string::npos) {
            auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v.d);
            if (ec != std::errc{} || p != text.data() + text.size())
                fail("bad number '" + text + "'");
            v.type = Scalar::Type::real;
            return v;
        }
        auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v.i);
        if (ec != std::errc{} || p != text.data() + text.size())
            fail("bad integer '" + text + "'");
        v.type = Scalar::Type::integer;
        return v;
    }

    std::vector<Scalar> array(const std::string& text) const {
        if (text.size() < 2 || text.back() != ']') fail("unterminated array " + text);
        std::vector<Scalar> out;
        const std::string body = text.substr(1, text.size() - 2);
        std::string item;
        std::istringstream ss(body);
        bool any = false;
        while (std::getline(ss, item, ',')) {
            any = true;
            out.push_back(scalar(trim(item)));
        }
        if (!any && !trim(body).empty()) fail("malformed array " + text);
        return out;
    }

    std::uint32_t as_u32(const Scalar& v, const char* key) const {
        if (v.type != Scalar::Type::integer ||
            v.i > std::numeric_limits<std::uint32_t>::max())
            fail(std::string(key) + " wants a small non-negative integer");
        return static_cast<std::uint32_t>(v.i);
    }
    std::uint64_t as_u64(const Scalar& v, const char* key) const {
        if (v.type != Scalar::Type::integer)
            fail(std::string(key) + " wants a non-negative integer");
        return v.i;
    }
    double as_double(const Scalar& v, const char* key) const {
        if (v.type == Scalar::Type::real) return v.d;
        if (v.type == Scalar::Type::integer) return static_cast<double>(v.i);
        fail(std::string(key) + " wants a number");
    }
    std::string as_string(const Scalar& v, const char* key) const {
        if (v.type != Scalar::Type::string) fail(std::string(key) + " wants a string");
        return v.s;
    }

    // ---- key dispatch ------------------------------------------------------

    void key_value(const std::string& line) {
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail("expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string rhs = trim(line.substr(eq + 1));
        if (key.empty()) fail("missing key");
        if (rhs.empty()) fail("missing value for " + key);

        switch (section_) {
        case Section::none: fail("key '" + key + "' outside any table");
        case Section::defaults: defaults_key(key, rhs); break;
        case Section::workload: workload_key(key, rhs); break;
        }
    }

    void defaults_key(const std::string& key, const std::string& rhs) {
        SuiteDefaults& d = suite_.defaults;
        if (key == "k") {
            d.k = as_u32(scalar(rhs), "k");
        } else if (key == "s") {
            d.s = as_u32(scalar(rhs), "s");
        } else if (key == "repetitions") {
            d.repetitions = as_u32(scalar(rhs), "repetitions");
            if (d.repetitions == 0) fail("repetitions must be positive");
        } else if (key == "hco_max_iters") {
            d.hco_max_iters = as_u32(scalar(rhs), "hco_max_iters");
        } else if (key == "pso_swarm") {
            d.pso.swarm_size = as_u32(scalar(rhs), "pso_swarm");
        } else if (key == "pso_iters") {
            d.pso.iterations = as_u32(scalar(rhs), "pso_iters");
        } else if (key == "pso_penalty") {
            d.pso.capacity_penalty = as_double(scalar(rhs), "pso_penalty");
        } else if (key == "pso_inertia") {
            d.pso.inertia = as_double(scalar(rhs), "pso_inertia");
        } else if (key == "pso_cognitive") {
            d.pso.cognitive = as_double(scalar(rhs), "pso_cognitive");
        } else if (key == "pso_social") {
            d.pso.social = as_double(scalar(rhs), "pso_social");
        } else if (key == "algos") {
            if (rhs.front() != '[') fail("algos wants an array");
            d.algos.clear();
            for (const Scalar& v : array(rhs)) d.algos.push_back(parse_algo(as_string(v, "algos")));
        } else if (key == "seeds") {
            if (rhs.front() != '[') fail("seeds wants an array");
            d.seeds.clear();
            for (const Scalar& v : array(rhs)) d.seeds.push_back(as_u64(v, "seeds"));
        } else {
            fail("unknown [defaults] key '" + key + "'");
        }
    }

    void workload_key(const std::string& key, const std::string& rhs) {
        SuiteWorkload& w = *current_;
        if (key == "name") {
            w.name = as_string(scalar(rhs), "name");
        } else if (key == "layers") {
            if (rhs.front() != '[') fail("layers wants an array");
            w.layers.clear();
            for (const Scalar& v : array(rhs)) {
                const std::uint32_t sz = as_u32(v, "layers");
                if (sz == 0) fail("layer sizes must be positive");
                w.layers.push_back(sz);
            }
            if (w.layers.empty()) fail("layers must not be empty");
        } else if (key == "file") {
            w.file = base_dir_ / as_string(scalar(rhs), "file");
        } else if (key == "spikes_lo") {
            w.spikes_lo = as_u32(scalar(rhs), "spikes_lo");
        } else if (key == "spikes_hi") {
            w.spikes_hi = as_u32(scalar(rhs), "spikes_hi");
        } else if (key == "total_spikes") {
            w.total_spikes = as_u64(scalar(rhs), "total_spikes");
        } else if (key == "k") {
            w.k = as_u32(scalar(rhs), "k");
        } else if (key == "s") {
            w.s = as_u32(scalar(rhs), "s");
        } else {
            fail("unknown [[workload]] key '" + key + "'");
        }
    }
};

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2.0;
}

double mean(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

double ratio(double num, double den) {
    if (den > 0.0) return num / den;
    return num > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
}

} // namespace

Suite parse_suite(std::istream& in, const std::filesystem::path& base_dir,
                  const std::string& origin) {
    return SuiteParser(in, base_dir, origin).run();
}

Suite load_suite(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open suite file " + path.string());
    return parse_suite(in, path.parent_path(), path.string());
}

SuiteRunResult run_suite(const Suite& suite,
                         const std::function<void(const ExperimentRecord&)>& on_record,
                         const std::function<void(const SuiteCell&, const std::string&)>& on_failure) {
    SuiteRunResult result;
    const SuiteDefaults& d = suite.defaults;

    for (const SuiteWorkload& w : suite.workloads) {
        std::optional<SpikeGraph> file_graph;
        const std::uint32_t k = w.k.value_or(d.k);

        for (const std::uint64_t seed : d.seeds) {
            std::optional<SpikeGraph> g;
            std::string build_error;
            try {
                if (!w.file.empty()) {
                    if (!file_graph) file_graph = load_graph(w.file);
                    g = w.total_spikes ? rescale_total_spikes(*file_graph, w.total_spikes)
                                       : *file_graph;
                } else {
                    TopologySpec spec;
                    spec.layer_sizes = w.layers;
                    spec.spikes_lo = w.spikes_lo;
                    spec.spikes_hi = w.spikes_hi;
                    spec.seed = seed;
                    SpikeGraph built = generate_feedforward(spec);
                    g = w.total_spikes ? rescale_total_spikes(built, w.total_spikes)
                                       : std::move(built);
                }
            } catch (const std::exception& e) {
                build_error = e.what();
            }

            for (const Algo algo : d.algos) {
                const SuiteCell cell{w.name, algo, seed};
                if (!g) {
                    ++result.failures;
                    if (on_failure) on_failure(cell, build_error);
                    continue;
                }
                HardwareConfig hw;
                hw.crossbar_size = k;
                const auto s_opt = w.s ? w.s : d.s;
                try {
                    hw.crossbar_count =
                        s_opt ? *s_opt : default_crossbar_count(g->num_neurons(), k);
                    AlgoOptions opts;
                    opts.algo = algo;
                    opts.max_iters = d.hco_max_iters;
                    opts.pso = d.pso;
                    ExperimentOutcome out =
                        run_experiment(*g, w.name, hw, opts, seed, d.repetitions, on_record);
                    for (ExperimentRecord& rec : out.records)
                        result.records.push_back(std::move(rec));
                } catch (const std::exception& e) {
                    ++result.failures;
                    if (on_failure) on_failure(cell, e.what());
                }
            }
        }
    }

    for (const SuiteWorkload& w : suite.workloads) {
        std::vector<double> hco_wall, pso_wall, hco_inter, pso_inter;
        for (const ExperimentRecord& r : result.records) {
            if (r.workload != w.name) continue;
            if (r.algo == Algo::hco) {
                hco_wall.push_back(r.wall_ms);
                hco_inter.push_back(static_cast<double>(r.inter_cluster_spikes));
            } else if (r.algo == Algo::pso) {
                pso_wall.push_back(r.wall_ms);
                pso_inter.push_back(static_cast<double>(r.inter_cluster_spikes));
            }
        }
        if (hco_wall.empty() || pso_wall.empty()) continue;
        SuiteSummaryRow row;
        row.workload = w.name;
        row.wall_ratio = ratio(median(pso_wall), median(hco_wall));
        row.inter_ratio = ratio(mean(hco_inter), mean(pso_inter));
        result.summary.push_back(std::move(row));
    }
    return result;
}

} // namespace crossmap
