#include "manet/simulation.hpp"

#include "manet/aodv.hpp"
#include "manet/dsdv.hpp"
#include "manet/dsr.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace manet {

Simulation::Simulation(const ScenarioConfig& cfg)
    : cfg_(cfg), engine_(cfg.seed, cfg.duration) {
    cfg_.check();
    scenario_ = generate_manhattan(cfg_.grid, cfg_.mobility_params(),
                                   cfg_.duration, engine_.substream("mobility"));
    flows_ = generate_connections(cfg_.n_nodes, cfg_.max_conn, cfg_.cbr_rate,
                                  cfg_.payload, engine_.substream("traffic"));
    build_nodes();
}

Simulation::Simulation(const ScenarioConfig& cfg, MobilityScenario scenario,
                       std::vector<Flow> flows)
    : cfg_(cfg), engine_(cfg.seed, cfg.duration),
      scenario_(std::move(scenario)), flows_(std::move(flows)) {
    cfg_.check();
    if (scenario_.traces.size() != cfg_.n_nodes) {
        throw std::invalid_argument(
            "simulation: scenario trace count does not match n_nodes");
    }
    build_nodes();
}

void Simulation::build_nodes() {
    macs_.reserve(cfg_.n_nodes);
    agents_.reserve(cfg_.n_nodes);
    for (NodeId i = 0; i < cfg_.n_nodes; ++i) {
        macs_.push_back(std::make_unique<Mac>(*this, medium_, i, cfg_.mac));
        switch (cfg_.protocol) {
        case Protocol::Aodv:
            agents_.push_back(std::make_unique<AodvAgent>(*this, i, cfg_.aodv));
            break;
        case Protocol::Dsr:
            agents_.push_back(std::make_unique<DsrAgent>(*this, i, cfg_.dsr));
            break;
        case Protocol::Dsdv:
            agents_.push_back(std::make_unique<DsdvAgent>(*this, i, cfg_.dsdv));
            break;
        }
    }
}

Vec2 Simulation::position_of(NodeId node, double t) {
    return position_at(scenario_, node, std::min(t, scenario_.duration));
}

void Simulation::mac_send(NodeId from, const Packet& pkt, NodeId next_hop) {
    macs_.at(from)->send(pkt, next_hop);
}

void Simulation::deliver(NodeId to, Packet pkt, NodeId from) {
    ++pkt.hops;
    agents_.at(to)->handle(std::move(pkt), from);
}

void Simulation::link_failed(NodeId at, NodeId next_hop, const Packet& pkt) {
    agents_.at(at)->on_link_failure(next_hop, pkt);
}

void Simulation::packet_lost(NodeId at, const Packet& pkt, DropReason r) {
    recorder_.drop(engine_.now(), at, pkt, r);
}

void Simulation::emit_packet(std::size_t flow_idx, double at) {
    const Flow& f = flows_[flow_idx];
    Packet pkt;
    pkt.uid = next_uid();
    pkt.type = PacketType::Cbr;
    pkt.src = f.src;
    pkt.dst = f.dst;
    pkt.origin_time = at;
    CbrData data;
    data.payload_bytes = f.payload;
    pkt.size_bytes = packet_wire_size(data);
    pkt.body = std::move(data);
    recorder_.send(at, f.src, pkt);
    agents_.at(f.src)->originate(std::move(pkt));
}

void Simulation::schedule_flow(std::size_t flow_idx, double at) {
    if (at >= cfg_.duration) return;
    engine_.schedule(at, EventKind::TrafficEmit, flows_[flow_idx].src,
                     [this, flow_idx, at] {
                         emit_packet(flow_idx, at);
                         schedule_flow(flow_idx,
                                       at + 1.0 / flows_[flow_idx].rate);
                     });
}

// Every route table must be loop-free at all times: for each destination,
// chase next hops across all nodes and flag any cycle.
void Simulation::snapshot_check() {
    std::map<NodeId, std::map<NodeId, NodeId>> next_hop; // dest -> node -> nh
    for (NodeId i = 0; i < cfg_.n_nodes; ++i) {
        for (const auto& [dest, nh] : agents_[i]->next_hop_snapshot()) {
            next_hop[dest][i] = nh;
        }
    }
    for (const auto& [dest, hops] : next_hop) {
        for (const auto& [start, first] : hops) {
            NodeId cur = start;
            std::uint32_t steps = 0;
            while (cur != dest && steps <= cfg_.n_nodes) {
                auto it = hops.find(cur);
                if (it == hops.end()) break; // chain ends off-table: no loop
                cur = it->second;
                ++steps;
            }
            if (steps > cfg_.n_nodes) {
                recorder_.count_violation();
                break; // one report per destination snapshot
            }
        }
    }
}

std::uint64_t Simulation::inflight_cbr() const {
    std::uint64_t n = 0;
    for (const auto& mac : macs_) n += mac->cbr_held();
    for (const auto& agent : agents_) n += agent->buffered_cbr();
    return n;
}

RunMetrics Simulation::run() {
    if (ran_) throw std::logic_error("simulation: run() called twice");
    ran_ = true;

    for (auto& agent : agents_) agent->start();
    for (std::size_t i = 0; i < flows_.size(); ++i) {
        schedule_flow(i, flows_[i].start_at);
    }
    if (cfg_.validate_invariants) {
        for (double t = 1.0; t < cfg_.duration; t += 1.0) {
            engine_.schedule(t, EventKind::Timer, 0,
                             [this] { snapshot_check(); });
        }
    }

    engine_.run(cfg_.duration);

    if (std::getenv("MANET_DEBUG_CHANNEL")) {
        std::fprintf(stderr, "channel: tx=%llu airtime=%.2f s\n",
                     static_cast<unsigned long long>(medium_.total_tx()),
                     medium_.total_airtime());
    }

    RunMetrics m = recorder_.finalize(cfg_.duration);
    if (m.sent != m.received + m.dropped + inflight_cbr()) {
        recorder_.count_violation();
        m = recorder_.finalize(cfg_.duration);
    }
    return m;
}

} // namespace manet
