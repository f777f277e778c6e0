#ifndef MANET_SWEEP_HPP
#define MANET_SWEEP_HPP

#include "manet/config.hpp"
#include "manet/metrics.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace manet {

/**
 * The full experiment matrix: protocols x (nodes, connections) x pause x
 * seed. Defaults reproduce the reference comparison (270 runs).
 */
struct SweepSpec {
    std::vector<Protocol> protocols = {Protocol::Aodv, Protocol::Dsr,
                                       Protocol::Dsdv};
    std::vector<std::pair<std::uint32_t, std::uint32_t>> sizes = {
        {10, 8}, {30, 25}, {50, 40}};
    std::vector<double> pauses = {0, 20, 40, 60, 80, 100};
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    unsigned jobs = 0; // 0 = hardware concurrency
    ScenarioConfig base; // protocol/nodes/pause/seed fields are overwritten
};

struct CellResult {
    Protocol protocol = Protocol::Aodv;
    std::uint32_t n_nodes = 0;
    std::uint32_t max_conn = 0;
    double pause = 0.0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    RunMetrics metrics;
};

struct SweepResult {
    std::vector<CellResult> cells; // (protocol, n_nodes, pause, seed) order
    bool all_ok = false;
    std::uint64_t invariant_violations = 0;
};

/// Run every cell, possibly in parallel; the result order never depends on
/// scheduling. Cell failures are recorded, not thrown.
SweepResult run_sweep(const SweepSpec& spec);

/// Seed-aggregated view: metric -> n_nodes -> pause -> protocol.
/// Metrics are "pdf", "delay", "throughput". Delay cells with no delivered
/// packets across all seeds are absent.
using TrendData =
    std::map<std::string,
             std::map<std::uint32_t,
                      std::map<double, std::map<Protocol, Aggregate>>>>;

TrendData trend_data(const SweepSpec& spec, const SweepResult& result);

/// CSV files keyed by name ("pdf_10.csv", ...), one per (metric, size),
/// columns pause,aodv_mean,aodv_std,dsr_mean,dsr_std,dsdv_mean,dsdv_std.
std::map<std::string, std::string> render_csvs(const TrendData& data);

/// Parse CSV files previously written by render_csvs from a directory.
TrendData trend_data_from_csv_dir(const std::string& dir);

struct TrendCheck {
    std::string name;
    bool pass = false;
    bool warn = false; // passed only inside the relaxed tolerance
    std::string detail;
};

/// Evaluate the five comparative-trend assertions over aggregated data.
std::vector<TrendCheck> check_trends(const TrendData& data);

/// JSON rendering of the verdicts for the sweep summary file.
std::string trend_report_json(const std::vector<TrendCheck>& checks);

} // namespace manet

#endif // MANET_SWEEP_HPP
