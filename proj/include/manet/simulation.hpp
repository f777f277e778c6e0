#ifndef MANET_SIMULATION_HPP
#define MANET_SIMULATION_HPP

#include "manet/config.hpp"
#include "manet/engine.hpp"
#include "manet/mac.hpp"
#include "manet/metrics.hpp"
#include "manet/mobility.hpp"
#include "manet/network.hpp"
#include "manet/routing.hpp"
#include "manet/traffic.hpp"

#include <memory>
#include <vector>

namespace manet {

/**
 * One complete run: mobility scenario, shared medium, per-node MAC and
 * routing agent, CBR sources, trace recorder. Construct, run(), read the
 * metrics. A given (config, seed) pair always produces a byte-identical
 * trace.
 */
class Simulation final : public Network {
public:
    /// Generate mobility and traffic from the config's seed.
    explicit Simulation(const ScenarioConfig& cfg);

    /// Use a pre-built scenario and flow list (shared-scenario sweeps, tests).
    Simulation(const ScenarioConfig& cfg, MobilityScenario scenario,
               std::vector<Flow> flows);

    RunMetrics run();

    // Network interface
    Engine& engine() override { return engine_; }
    Recorder& recorder() override { return recorder_; }
    const MacConfig& mac_config() const override { return cfg_.mac; }
    std::uint32_t node_count() const override { return cfg_.n_nodes; }
    Vec2 position_of(NodeId node, double t) override;
    void mac_send(NodeId from, const Packet& pkt, NodeId next_hop) override;
    void deliver(NodeId to, Packet pkt, NodeId from) override;
    void link_failed(NodeId at, NodeId next_hop, const Packet& pkt) override;
    void packet_lost(NodeId at, const Packet& pkt, DropReason r) override;
    std::uint64_t next_uid() override { return next_uid_++; }
    RngStream& rng(const std::string& label) override {
        return engine_.substream(label);
    }

    const ScenarioConfig& config() const { return cfg_; }
    const MobilityScenario& scenario() const { return scenario_; }
    const std::vector<Flow>& flows() const { return flows_; }
    RoutingAgent& agent(NodeId node) { return *agents_.at(node); }

    /// CBR packets currently queued, embedded, or buffered anywhere.
    std::uint64_t inflight_cbr() const;

private:
    void build_nodes();
    void schedule_flow(std::size_t flow_idx, double at);
    void emit_packet(std::size_t flow_idx, double at);
    void snapshot_check();

    ScenarioConfig cfg_;
    Engine engine_;
    Recorder recorder_;
    MobilityScenario scenario_;
    std::vector<Flow> flows_;
    Medium medium_;
    std::vector<std::unique_ptr<Mac>> macs_;
    std::vector<std::unique_ptr<RoutingAgent>> agents_;
    std::uint64_t next_uid_ = 1;
    bool ran_ = false;
};

} // namespace manet

#endif // MANET_SIMULATION_HPP
