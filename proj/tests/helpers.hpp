#ifndef MANET_TESTS_HELPERS_HPP
#define MANET_TESTS_HELPERS_HPP

#include "manet/engine.hpp"
#include "manet/mac.hpp"
#include "manet/metrics.hpp"
#include "manet/mobility.hpp"
#include "manet/network.hpp"
#include "manet/packet.hpp"
#include "manet/types.hpp"

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <utility>
#include <vector>

namespace manet::test {

/// Scenario where every node sits still at a fixed position.
inline MobilityScenario static_scenario(const std::vector<Vec2>& positions,
                                        double duration) {
    MobilityScenario s;
    s.duration = duration;
    for (const Vec2& p : positions) {
        s.traces.push_back({Waypoint{0.0, p, 0.0}});
    }
    return s;
}

/// Hop count of a shortest path under a unit-disk radio; -1 if unreachable.
inline int bfs_hops(const std::vector<Vec2>& positions, double range,
                    NodeId src, NodeId dst) {
    std::vector<int> dist(positions.size(), -1);
    std::deque<NodeId> frontier{src};
    dist[src] = 0;
    while (!frontier.empty()) {
        NodeId u = frontier.front();
        frontier.pop_front();
        if (u == dst) return dist[u];
        for (NodeId v = 0; v < positions.size(); ++v) {
            if (dist[v] >= 0 || v == u) continue;
            if (distance(positions[u], positions[v]) <= range) {
                dist[v] = dist[u] + 1;
                frontier.push_back(v);
            }
        }
    }
    return dist[dst];
}

/// True iff every node can reach every other under the unit-disk radio.
inline bool connected(const std::vector<Vec2>& positions, double range) {
    if (positions.empty()) return true;
    for (NodeId i = 1; i < positions.size(); ++i) {
        if (bfs_hops(positions, range, 0, i) < 0) return false;
    }
    return true;
}

inline Packet make_cbr(std::uint64_t uid, NodeId src, NodeId dst, double at,
                       std::uint32_t payload = 512) {
    Packet p;
    p.uid = uid;
    p.type = PacketType::Cbr;
    p.src = src;
    p.dst = dst;
    p.origin_time = at;
    CbrData d;
    d.payload_bytes = payload;
    p.size_bytes = packet_wire_size(d);
    p.body = std::move(d);
    return p;
}

/// Minimal Network for exercising the MAC layer in isolation: fixed node
/// positions, deliveries and link failures recorded instead of routed.
class MacNet : public Network {
public:
    struct Delivery {
        double at;
        NodeId to;
        NodeId from;
        Packet pkt;
    };
    struct Failure {
        double at;
        NodeId node;
        NodeId next_hop;
        Packet pkt;
    };

    MacNet(std::vector<Vec2> positions, MacConfig cfg,
           std::uint64_t seed = 1)
        : eng_(seed), cfg_(cfg), positions_(std::move(positions)) {
        for (NodeId i = 0; i < positions_.size(); ++i) {
            macs_.push_back(std::make_unique<Mac>(*this, medium_, i, cfg_));
        }
    }

    Engine& engine() override { return eng_; }
    Recorder& recorder() override { return rec_; }
    const MacConfig& mac_config() const override { return cfg_; }
    std::uint32_t node_count() const override {
        return static_cast<std::uint32_t>(positions_.size());
    }
    Vec2 position_of(NodeId node, double) override {
        return positions_.at(node);
    }
    void mac_send(NodeId from, const Packet& pkt, NodeId next_hop) override {
        macs_.at(from)->send(pkt, next_hop);
    }
    void deliver(NodeId to, Packet pkt, NodeId from) override {
        deliveries.push_back({eng_.now(), to, from, std::move(pkt)});
    }
    void link_failed(NodeId at, NodeId next_hop, const Packet& pkt) override {
        failures.push_back({eng_.now(), at, next_hop, pkt});
    }
    void packet_lost(NodeId at, const Packet& pkt, DropReason r) override {
        rec_.drop(eng_.now(), at, pkt, r);
    }
    std::uint64_t next_uid() override { return next_uid_++; }
    RngStream& rng(const std::string& label) override {
        return eng_.substream(label);
    }

    Mac& mac(NodeId node) { return *macs_.at(node); }
    Medium& medium() { return medium_; }

    std::vector<Delivery> deliveries;
    std::vector<Failure> failures;

private:
    Engine eng_;
    Recorder rec_;
    MacConfig cfg_;
    Medium medium_;
    std::vector<Vec2> positions_;
    std::vector<std::unique_ptr<Mac>> macs_;
    std::uint64_t next_uid_ = 1;
};

} // namespace manet::test

#endif // MANET_TESTS_HELPERS_HPP
