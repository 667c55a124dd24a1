// voterlab command-line driver: simulate, estimate, oracle, render, diameter.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "voterlab/voterlab.hpp"

namespace {

using namespace voterlab;

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

Site parse_site(const std::string& text) {
    const auto parts = split_list(text);
    if (parts.size() != 2) throw ConfigError("site must be written i,j; got '" + text + "'");
    return {parse_scalar<int>("site", parts[0]), parse_scalar<int>("site", parts[1])};
}

// Opens `path` for writing, or returns stdout for "-".
class Output {
  public:
    explicit Output(const std::string& path) {
        if (path.empty() || path == "-") return;
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
        if (!*file_) throw Error("cannot open '" + path + "' for writing");
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    void finish() {
        stream().flush();
        if (!stream()) throw Error("write failed");
    }

  private:
    std::unique_ptr<std::ofstream> file_;
};

struct SimulateFlags {
    std::string config;
    std::string models;
    std::string L;
    std::string m;
    std::string seed;
    std::string threads;
    std::string convention;
    std::string out;
    std::string event_cap;
    bool timing = false;
};

ExperimentConfig build_config(const SimulateFlags& f) {
    ExperimentConfig cfg;
    cfg.models = {parse_model("voter")};
    cfg.L_list = {64};
    if (!f.config.empty()) load_config_file(cfg, f.config);
    auto set = [&](const char* key, const std::string& v) {
        if (!v.empty()) apply_setting(cfg, key, v);
    };
    set("models", f.models);
    set("L", f.L);
    set("m", f.m);
    set("seed", f.seed);
    set("threads", f.threads);
    set("convention", f.convention);
    set("out", f.out);
    set("event-cap", f.event_cap);
    if (f.timing) cfg.timing = true;
    cfg.validate();
    return cfg;
}

int cmd_simulate(const SimulateFlags& flags) {
    const ExperimentConfig cfg = build_config(flags);
    const std::size_t total = cfg.models.size() * cfg.L_list.size() * cfg.m;
    std::size_t last_pct = 101;
    auto progress = [&](std::size_t done, std::size_t all) {
        const std::size_t pct = done * 100 / all;
        if (pct != last_pct) {
            last_pct = pct;
            std::fprintf(stderr, "\rsimulate: %zu/%zu (%zu%%)", done, all, pct);
            if (done == all) std::fputc('\n', stderr);
        }
    };
    const auto rows = run_experiment(cfg, total > 1 ? progress : std::function<void(std::size_t, std::size_t)>{});
    Output out(cfg.output_path);
    write_csv(out.stream(), rows);
    out.finish();
    std::size_t failed = 0;
    for (const auto& r : rows) failed += r.ok() ? 0 : 1;
    if (failed) std::fprintf(stderr, "simulate: %zu replicate(s) hit the event cap\n", failed);
    return 0;
}

int cmd_estimate(const std::string& csv_path, const std::string& out_path) {
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw Error("cannot open '" + csv_path + "'");
    const auto records = read_csv(in);
    const EstimatorReport report = summarize(records);
    write_report_text(std::cout, report);
    if (!out_path.empty()) {
        Output out(out_path);
        write_report_csv(out.stream(), report);
        out.finish();
    }
    return 0;
}

int cmd_oracle(const std::string& kind, int L, const std::string& x_text, const std::string& y_text,
               const std::string& out_path) {
    const BoxGeometry g(L);
    const Site x = x_text.empty() ? g.center() : parse_site(x_text);
    auto need_y = [&] {
        if (y_text.empty()) throw ConfigError("oracle " + kind + " needs --y i,j");
        return parse_site(y_text);
    };
    Output out(out_path);
    auto& os = out.stream();
    os.precision(17);
    if (kind == "harmonic") {
        const HarmonicField h = harmonic_measure(g);
        write_site_values_csv(os, g, h.values());
    } else if (kind == "pair") {
        const Site y = need_y();
        os << pair_coalescence_prob(g, x, y) << '\n';
    } else if (kind == "class-size") {
        os << expected_class_size_exact(g, x) << '\n';
    } else if (kind == "stationary") {
        const ExactStationary pi = exact_stationary(g);
        const int n = pi.num_interior();
        os << "config,votes,probability\n";
        for (std::size_t c = 0; c < pi.num_configurations(); ++c) {
            std::string bits;
            for (int k = 0; k < n; ++k) bits += ((c >> k) & 1U) ? '1' : '0';
            os << c << ',' << bits << ',' << pi.probability(c) << '\n';
        }
    } else if (kind == "cov") {
        const Site y = need_y();
        os << joint_vote_cov_exact(g, x, y) << '\n';
    } else {
        throw ConfigError("unknown oracle '" + kind + "' (harmonic|pair|class-size|stationary|cov)");
    }
    out.finish();
    return 0;
}

struct RenderFlags {
    std::string model = "voter";
    int L = 0;
    std::uint64_t seed = 1;
    std::size_t top_k = 0;
    std::string from_csv;
    std::uint64_t run_id = 0;
    std::string out;
    std::uint64_t event_cap = kDefaultEventCap;
};

int cmd_render(const RenderFlags& f) {
    NamedModel model = parse_model(f.model);
    int side = f.L;
    std::uint64_t seed = f.seed;
    if (!f.from_csv.empty()) {
        std::ifstream in(f.from_csv, std::ios::binary);
        if (!in) throw Error("cannot open '" + f.from_csv + "'");
        const auto records = read_csv(in);
        const auto it = std::find_if(records.begin(), records.end(),
                                     [&](const RunRecord& r) { return r.run_id == f.run_id; });
        if (it == records.end()) throw ConfigError("no run_id " + std::to_string(f.run_id) + " in " + f.from_csv);
        model = {it->model_name, {it->p, it->q}};
        side = simulated_side(it->L, it->convention);
        seed = it->seed;
    }
    if (side < 3) throw ConfigError("render needs --L >= 3 or --from-csv");
    const SampleOutcome out = sample(BoxGeometry(side), model.params, seed, {f.event_cap, SamplerStrategy::automatic});
    Output file(f.out);
    render_svg(file.stream(), out, {f.top_k, true, true, 0.0});
    file.finish();
    return 0;
}

struct DiameterFlags {
    std::string model = "voter";
    int L = 128;
    std::uint64_t m = 100;
    std::uint64_t seed = 1;
    std::string convention = "appendix";
    std::string out;
};

// Largest-class diameter exceedance curve: fraction of samples with diameter >= c L.
int cmd_diameter(const DiameterFlags& f) {
    ExperimentConfig cfg;
    cfg.models = {parse_model(f.model)};
    cfg.L_list = {f.L};
    cfg.m = f.m;
    cfg.master_seed = f.seed;
    apply_setting(cfg, "convention", f.convention);
    cfg.validate();
    const BoxGeometry g(simulated_side(f.L, cfg.convention));
    std::vector<double> diameters;
    for (const ReplicateTask& task : plan_tasks(cfg)) {
        const SampleOutcome out = sample(g, cfg.models[0].params, task.seed);
        diameters.push_back(class_report(out).largest_class_diameter);
    }
    std::vector<double> cs;
    for (int k = 1; k <= 30; ++k) cs.push_back(k / 20.0);
    const auto frac = diameter_exceedance(diameters, f.L, cs);
    Output file(f.out);
    file.stream() << "c,fraction\n";
    for (std::size_t k = 0; k < cs.size(); ++k) file.stream() << format_double(cs[k]) << ',' << format_double(frac[k]) << '\n';
    file.finish();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"voterlab: stationary voter model and (p,q) family on rhombic triangular boxes"};
    app.require_subcommand(1);

    SimulateFlags sim;
    auto* simulate = app.add_subcommand("simulate", "run replicates and write one CSV row per sample");
    simulate->add_option("--config", sim.config, "key = value configuration file; flags override it");
    simulate->add_option("--models", sim.models, "comma list: voter,cow,harmonic,percolation or name:p:q");
    simulate->add_option("--L", sim.L, "comma list of nominal side lengths");
    simulate->add_option("--m", sim.m, "replicates per (model, L)");
    simulate->add_option("--seed", sim.seed, "master seed");
    simulate->add_option("--threads", sim.threads, "worker threads");
    simulate->add_option("--convention", sim.convention, "exact | appendix (simulate on L+2 boxes)");
    simulate->add_option("--out", sim.out, "output CSV ('-' for stdout)");
    simulate->add_option("--event-cap", sim.event_cap, "per-sample event limit");
    simulate->add_flag("--timing", sim.timing, "fill elapsed_ms (output is then no longer reproducible)");

    std::string csv_path;
    std::string estimate_out;
    auto* estimate = app.add_subcommand("estimate", "exponent tables from a simulate CSV");
    estimate->add_option("csv", csv_path, "CSV written by simulate")->required();
    estimate->add_option("--out", estimate_out, "also write the report as long-format CSV");

    std::string oracle_kind;
    int oracle_L = 0;
    std::string oracle_x;
    std::string oracle_y;
    std::string oracle_out;
    auto* oracle = app.add_subcommand("oracle", "exact small-box computations");
    oracle->add_option("kind", oracle_kind, "harmonic | pair | class-size | stationary | cov")->required();
    oracle->add_option("--L", oracle_L, "box side length")->required();
    oracle->add_option("--x", oracle_x, "site i,j (default: centre)");
    oracle->add_option("--y", oracle_y, "second site i,j");
    oracle->add_option("--out", oracle_out, "output file (default stdout)");

    RenderFlags rf;
    auto* render = app.add_subcommand("render", "SVG image of one reproducible sample");
    render->add_option("--models", rf.model, "model (first entry is used)");
    render->add_option("--L", rf.L, "simulated box side length");
    render->add_option("--seed", rf.seed, "sample seed");
    render->add_option("--top-k", rf.top_k, "colour the k largest coalescence classes");
    render->add_option("--from-csv", rf.from_csv, "take model, box and seed from a simulate CSV row");
    render->add_option("--run-id", rf.run_id, "row to re-simulate with --from-csv");
    render->add_option("--out", rf.out, "output SVG (default stdout)");
    render->add_option("--event-cap", rf.event_cap, "per-sample event limit");

    DiameterFlags df;
    auto* diam = app.add_subcommand("diameter", "largest-class diameter exceedance curve");
    diam->add_option("--models", df.model, "model");
    diam->add_option("--L", df.L, "nominal side length");
    diam->add_option("--m", df.m, "samples");
    diam->add_option("--seed", df.seed, "master seed");
    diam->add_option("--convention", df.convention, "exact | appendix");
    diam->add_option("--out", df.out, "output CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim);
        if (estimate->parsed()) return cmd_estimate(csv_path, estimate_out);
        if (oracle->parsed()) return cmd_oracle(oracle_kind, oracle_L, oracle_x, oracle_y, oracle_out);
        if (diam->parsed()) return cmd_diameter(df);
        if (render->parsed()) {
            const auto models = split_list(rf.model);
            if (models.empty()) throw ConfigError("render needs a model");
            rf.model = models.front();
            return cmd_render(rf);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InvalidSizeError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
