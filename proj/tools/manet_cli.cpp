#include "manet/config.hpp"
#include "manet/mobility.hpp"
#include "manet/simulation.hpp"
#include "manet/sweep.hpp"
#include "manet/traffic.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

namespace fs = std::filesystem;

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> protocol;
    std::optional<std::uint32_t> nodes;
    std::optional<double> pause;
    std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "scenario config (JSON)");
    cmd->add_option("--seed", o.seed, "master RNG seed");
    cmd->add_option("--protocol", o.protocol, "aodv|dsr|dsdv");
    cmd->add_option("--nodes", o.nodes, "number of nodes");
    cmd->add_option("--pause", o.pause, "max pause time at intersections, s");
}

manet::ScenarioConfig load_config(const CommonOpts& o) {
    manet::ScenarioConfig cfg;
    if (!o.config_path.empty()) {
        cfg = manet::ScenarioConfig::from_file(o.config_path);
    }
    if (o.seed) cfg.seed = *o.seed;
    if (o.protocol) cfg.protocol = manet::protocol_from_string(*o.protocol);
    if (o.nodes) cfg.n_nodes = *o.nodes;
    if (o.pause) cfg.pause = *o.pause;
    cfg.check();
    return cfg;
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
    } else {
        write_file(out_path, content);
    }
}

int cmd_generate_mobility(const CommonOpts& o) {
    manet::ScenarioConfig cfg = load_config(o);
    manet::RngStream rng(cfg.seed, "mobility");
    manet::MobilityScenario s = manet::generate_manhattan(
        cfg.grid, cfg.mobility_params(), cfg.duration, rng);
    emit(o.out, manet::export_ns2(s));
    return 0;
}

int cmd_generate_traffic(const CommonOpts& o) {
    manet::ScenarioConfig cfg = load_config(o);
    manet::RngStream rng(cfg.seed, "traffic");
    auto flows = manet::generate_connections(cfg.n_nodes, cfg.max_conn,
                                             cfg.cbr_rate, cfg.payload, rng);
    emit(o.out, manet::flows_to_text(flows));
    return 0;
}

nlohmann::json metrics_json(const manet::RunMetrics& m) {
    nlohmann::json j{{"sent", m.sent},
                     {"received", m.received},
                     {"dropped", m.dropped},
                     {"control_packets", m.control_packets},
                     {"pdf", m.pdf},
                     {"throughput_kbps", m.throughput_kbps},
                     {"invariant_violations", m.invariant_violations}};
    if (m.avg_delay) {
        j["avg_delay"] = *m.avg_delay;
    } else {
        j["avg_delay"] = nullptr;
    }
    return j;
}

int cmd_run(const CommonOpts& o) {
    manet::ScenarioConfig cfg = load_config(o);
    manet::Simulation sim(cfg);
    manet::RunMetrics m = sim.run();
    if (!o.out.empty()) {
        fs::create_directories(o.out);
        write_file(fs::path(o.out) / "trace.csv", sim.recorder().serialize());
        write_file(fs::path(o.out) / "metrics.json",
                   metrics_json(m).dump(2) + "\n");
    }
    std::cout << metrics_json(m).dump(2) << "\n";
    return m.invariant_violations == 0 ? 0 : 1;
}

int cmd_sweep(const CommonOpts& o, unsigned jobs) {
    manet::SweepSpec spec;
    if (!o.config_path.empty()) {
        spec.base = manet::ScenarioConfig::from_file(o.config_path);
    }
    spec.jobs = jobs;
    // the sweep doubles as the validation campaign: loop-freedom snapshots
    // and conservation accounting run in every cell
    spec.base.validate_invariants = true;
    if (o.nodes) {
        // single size: connection count taken from the base config
        spec.sizes = {{*o.nodes, spec.base.max_conn}};
    }
    if (o.pause) spec.pauses = {*o.pause};
    if (o.seed) spec.seeds = {*o.seed};
    if (o.protocol) spec.protocols = {manet::protocol_from_string(*o.protocol)};

    manet::SweepResult result = manet::run_sweep(spec);
    manet::TrendData data = manet::trend_data(spec, result);
    auto csvs = manet::render_csvs(data);
    auto checks = manet::check_trends(data);

    std::string out_dir = o.out.empty() ? "." : o.out;
    fs::create_directories(out_dir);
    for (const auto& [name, content] : csvs) {
        write_file(fs::path(out_dir) / name, content);
    }
    write_file(fs::path(out_dir) / "trends.json",
               manet::trend_report_json(checks));

    std::size_t failed = 0;
    for (const auto& c : result.cells) {
        if (!c.ok) {
            ++failed;
            std::cerr << "cell failed: " << manet::to_string(c.protocol) << " "
                      << c.n_nodes << " nodes pause " << c.pause << " seed "
                      << c.seed << ": " << c.error << "\n";
        }
    }
    std::cout << result.cells.size() - failed << "/" << result.cells.size()
              << " cells ok, " << result.invariant_violations
              << " invariant violations\n";
    for (const auto& c : checks) {
        std::cout << (c.pass ? (c.warn ? "WARN" : "PASS") : "FAIL") << " "
                  << c.name << ": " << c.detail << "\n";
    }
    return failed == 0 && result.invariant_violations == 0 ? 0 : 1;
}

int cmd_check(const CommonOpts& o) {
    std::string dir = o.out.empty() ? "." : o.out;
    manet::TrendData data = manet::trend_data_from_csv_dir(dir);
    auto checks = manet::check_trends(data);
    bool all = true;
    for (const auto& c : checks) {
        std::cout << (c.pass ? (c.warn ? "WARN" : "PASS") : "FAIL") << " "
                  << c.name << ": " << c.detail << "\n";
        all = all && c.pass;
    }
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"MANET routing protocol simulator"};
    app.require_subcommand(1);

    CommonOpts mob, traf, run, sweep, check;
    unsigned jobs = 0;

    auto* c_mob = app.add_subcommand("generate-mobility",
                                     "write an ns-2 movement script");
    add_common(c_mob, mob);
    c_mob->add_option("--out", mob.out, "output file (default: stdout)");

    auto* c_traf =
        app.add_subcommand("generate-traffic", "write a CBR flow list");
    add_common(c_traf, traf);
    c_traf->add_option("--out", traf.out, "output file (default: stdout)");

    auto* c_run = app.add_subcommand("run", "run one scenario");
    add_common(c_run, run);
    c_run->add_option("--out", run.out, "output directory for trace/metrics");

    auto* c_sweep =
        app.add_subcommand("sweep", "run the full experiment matrix");
    add_common(c_sweep, sweep);
    c_sweep->add_option("--out", sweep.out, "output directory for CSVs");
    c_sweep->add_option("--jobs", jobs, "parallel cells (0 = all cores)");

    auto* c_check =
        app.add_subcommand("check", "evaluate trend assertions over sweep CSVs");
    c_check->add_option("--out", check.out, "directory holding the sweep CSVs");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_mob->parsed()) return cmd_generate_mobility(mob);
        if (c_traf->parsed()) return cmd_generate_traffic(traf);
        if (c_run->parsed()) return cmd_run(run);
        if (c_sweep->parsed()) return cmd_sweep(sweep, jobs);
        if (c_check->parsed()) return cmd_check(check);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
