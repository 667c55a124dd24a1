#ifndef VOTERLAB_EXPERIMENT_HPP
#define VOTERLAB_EXPERIMENT_HPP

//! \file experiment.hpp
//! Replicate orchestration: configuration, per-sample measurement and a
//! deterministic worker pool. Output rows depend only on the configuration,
//! never on thread count or completion order.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "classes.hpp"
#include "engine.hpp"
#include "error.hpp"
#include "interface.hpp"
#include "records.hpp"
#include "rng.hpp"

namespace voterlab {

class ConfigError : public Error {
  public:
    using Error::Error;
};

struct NamedModel {
    std::string name;
    ModelParams params;
};

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(std::string_view s) {
    std::string body = trim(s);
    if (body.size() >= 2 && body.front() == '[' && body.back() == ']') body = body.substr(1, body.size() - 2);
    std::vector<std::string> out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.size() >= 2 && item.front() == '"' && item.back() == '"') item = item.substr(1, item.size() - 2);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

// "voter", "cow", "harmonic", "percolation", or "name:p:q".
inline NamedModel parse_model(std::string_view spec) {
    const std::string s = trim(spec);
    if (s == "voter") return {s, ModelParams::voter()};
    if (s == "cow") return {s, ModelParams::cow()};
    if (s == "harmonic") return {s, ModelParams::harmonic()};
    if (s == "percolation") return {s, ModelParams::percolation()};
    const auto a = s.find(':');
    const auto b = a == std::string::npos ? std::string::npos : s.find(':', a + 1);
    if (a == std::string::npos || b == std::string::npos || a == 0) {
        throw ConfigError("unknown model '" + s + "' (expected voter|cow|harmonic|percolation|name:p:q)");
    }
    NamedModel m{s.substr(0, a), {}};
    try {
        std::size_t used = 0;
        const std::string ps = s.substr(a + 1, b - a - 1);
        const std::string qs = s.substr(b + 1);
        m.params.p = std::stod(ps, &used);
        if (used != ps.size()) throw std::invalid_argument(ps);
        m.params.q = std::stod(qs, &used);
        if (used != qs.size()) throw std::invalid_argument(qs);
    } catch (const std::exception&) {
        throw ConfigError("model '" + s + "': p and q must be numbers");
    }
    try {
        validate(m.params);
    } catch (const DomainError& e) {
        throw ConfigError("model '" + s + "': " + e.what());
    }
    return m;
}

struct RenderSpec {
    std::string model = "voter";
    int L = 0;  // simulated side length
    std::uint64_t seed = 0;
    std::size_t top_k = 5;
};

struct ExperimentConfig {
    std::vector<NamedModel> models;
    std::vector<int> L_list;
    std::uint64_t m = 1;
    std::uint64_t master_seed = 1;
    Convention convention = Convention::appendix;
    unsigned threads = 1;
    std::string output_path = "runs.csv";
    std::uint64_t event_cap = kDefaultEventCap;
    bool timing = false;  // elapsed_ms stays 0 unless set, so output is reproducible byte for byte
    std::optional<RenderSpec> render;

    void validate() const {
        if (models.empty()) throw ConfigError("no models configured");
        if (L_list.empty()) throw ConfigError("no L values configured");
        if (m < 1) throw ConfigError("replicate count m must be >= 1");
        if (threads < 1) throw ConfigError("thread count must be >= 1");
        if (models.size() > 256) throw ConfigError("at most 256 models per run");
        for (int L : L_list) {
            if (L < 3) throw ConfigError("L values must be >= 3, got " + std::to_string(L));
            if (L >= (1 << 20)) throw ConfigError("L too large");
        }
        if (m >= (std::uint64_t{1} << 36)) throw ConfigError("replicate count too large");
        std::set<std::string> names;
        for (const auto& mdl : models)
            if (!names.insert(mdl.name).second) throw ConfigError("duplicate model name '" + mdl.name + "'");
    }
};

template <class T>
T parse_scalar(const std::string& key, const std::string& value) {
    T out{};
    const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
        throw ConfigError("key '" + key + "': cannot parse '" + value + "'");
    }
    return out;
}

// Applies one key. Keys match the long command-line flags.
inline void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& raw) {
    std::string value = trim(raw);
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (key == "models") {
        cfg.models.clear();
        for (const auto& s : split_list(value)) cfg.models.push_back(parse_model(s));
    } else if (key == "L") {
        cfg.L_list.clear();
        for (const auto& s : split_list(value)) cfg.L_list.push_back(parse_scalar<int>(key, s));
    } else if (key == "m") {
        cfg.m = parse_scalar<std::uint64_t>(key, value);
    } else if (key == "seed") {
        cfg.master_seed = parse_scalar<std::uint64_t>(key, value);
    } else if (key == "threads") {
        cfg.threads = parse_scalar<unsigned>(key, value);
    } else if (key == "convention") {
        try {
            cfg.convention = parse_convention(value);
        } catch (const ParseError& e) {
            throw ConfigError(e.what());
        }
    } else if (key == "out") {
        cfg.output_path = value;
    } else if (key == "event-cap" || key == "event_cap") {
        cfg.event_cap = parse_scalar<std::uint64_t>(key, value);
    } else if (key == "top-k" || key == "top_k") {
        if (!cfg.render) cfg.render = RenderSpec{};
        cfg.render->top_k = parse_scalar<std::size_t>(key, value);
    } else if (key == "timing") {
        cfg.timing = value == "true" || value == "1";
    } else {
        throw ConfigError("unknown configuration key '" + key + "'");
    }
}

// Flat `key = value` document; '#' starts a comment; [section] headers are ignored.
inline std::vector<std::pair<std::string, std::string>> parse_config_text(std::istream& is) {
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty() || t.front() == '[') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        out.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return out;
}

inline void load_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    for (const auto& [k, v] : parse_config_text(in)) apply_setting(cfg, k, v);
}

// Per-sample observables.
struct Measurement {
    std::uint64_t interface_length = 0;
    double displacement_max = 0.0;
    ClassReport classes;
};

inline Measurement measure(const SampleOutcome& out, std::size_t top_k = 0) {
    const InterfacePath path = trace_interface(out.geometry, out.votes);
    const SidePartition sides = side_partition(out.geometry, out.votes, path);
    Measurement m;
    m.interface_length = path.length();
    m.displacement_max = max_displacement(out.geometry, path);
    m.classes = class_report(out, &sides, top_k);
    return m;
}

struct ReplicateTask {
    std::size_t model_index = 0;
    int L = 0;
    std::uint64_t replicate = 0;
    std::uint64_t seed = 0;
};

inline std::vector<ReplicateTask> plan_tasks(const ExperimentConfig& cfg) {
    std::vector<ReplicateTask> tasks;
    tasks.reserve(cfg.models.size() * cfg.L_list.size() * cfg.m);
    for (std::size_t mi = 0; mi < cfg.models.size(); ++mi)
        for (int L : cfg.L_list)
            for (std::uint64_t k = 0; k < cfg.m; ++k)
                tasks.push_back({mi, L, k, replicate_seed(cfg.master_seed, mi, static_cast<std::uint64_t>(L), k)});
    std::set<std::uint64_t> seen;
    for (const auto& t : tasks)
        if (!seen.insert(t.seed).second) throw ConsistencyError("replicate seed collision");
    return tasks;
}

inline RunRecord run_replicate(const ExperimentConfig& cfg, const ReplicateTask& task) {
    const NamedModel& model = cfg.models[task.model_index];
    RunRecord r;
    r.model_name = model.name;
    r.p = model.params.p;
    r.q = model.params.q;
    r.L = task.L;
    r.convention = cfg.convention;
    r.replicate = task.replicate;
    r.seed = task.seed;
    const auto start = std::chrono::steady_clock::now();
    try {
        const BoxGeometry g(simulated_side(task.L, cfg.convention));
        const SampleOutcome out = sample(g, model.params, task.seed, {cfg.event_cap, SamplerStrategy::automatic});
        const Measurement m = measure(out);
        r.status = "ok";
        r.interface_length = m.interface_length;
        r.displacement_max = m.displacement_max;
        r.class_origin_size = static_cast<std::uint64_t>(m.classes.class_origin_size);
        r.class_max_size = static_cast<std::uint64_t>(m.classes.class_max_size);
        r.conn_origin_size = static_cast<std::uint64_t>(m.classes.conn_origin_size);
        r.conn_max_size = static_cast<std::uint64_t>(m.classes.conn_max_size);
        r.cuts_largest = m.classes.cuts_largest;
        r.events = out.events;
    } catch (const RunawayError&) {
        r.status = "runaway";
        r.events = cfg.event_cap;
    }
    if (cfg.timing) {
        r.elapsed_ms = static_cast<std::uint64_t>(
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count());
    }
    return r;
}

// Runs every (model, L, replicate) task on a worker pool; rows come back in
// (model, L, replicate) order with run_id = row position.
inline std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg,
                                             const std::function<void(std::size_t, std::size_t)>& progress = {}) {
    cfg.validate();
    const auto tasks = plan_tasks(cfg);
    std::vector<RunRecord> rows(tasks.size());
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> finished{0};
    std::mutex progress_mutex;
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        while (true) {
            const std::size_t k = next.fetch_add(1);
            if (k >= tasks.size()) return;
            try {
                rows[k] = run_replicate(cfg, tasks[k]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(tasks.size());
                return;
            }
            const std::size_t done = finished.fetch_add(1) + 1;
            if (progress) {
                std::lock_guard lock(progress_mutex);
                progress(done, tasks.size());
            }
        }
    };
    const unsigned n_threads = std::max(1U, std::min<unsigned>(cfg.threads, static_cast<unsigned>(tasks.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);

    for (std::size_t k = 0; k < rows.size(); ++k) rows[k].run_id = k;
    return rows;
}

}  // namespace voterlab

#endif  // VOTERLAB_EXPERIMENT_HPP
