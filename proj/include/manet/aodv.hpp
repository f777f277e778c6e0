#ifndef MANET_AODV_HPP
#define MANET_AODV_HPP

#include "manet/routing.hpp"

#include <deque>
#include <map>
#include <set>
#include <vector>

namespace manet {

struct AodvConfig {
    double active_route_timeout = 3.0;
    // Per-hop traversal estimate; sets discovery timeout = 2 * this * ttl.
    // 80 ms rather than the textbook 40 ms: queueing at a loaded interface
    // runs to ~120 ms per hop, and timeouts shorter than the real round trip
    // re-flood discoveries that were about to succeed.
    double node_traversal = 0.080;
    std::vector<std::uint32_t> ring_ttls = {1, 3, 5, 7};
    std::uint32_t net_ttl = 35;
    std::uint32_t net_retries = 2; // network-wide repeats after the first
    std::size_t buffer_cap = 64;   // pending packets per destination
    double buffer_ttl = 30.0;
    // RREQ rebroadcasts are delayed by uniform[0, fwd_jitter] so a flood
    // does not fire from every neighbor in the same backoff window.
    double fwd_jitter = 0.01;
    // Pending-buffer drain pacing after a route comes up; dumping a full
    // buffer into the interface queue at once just trades buffered packets
    // for IFQ drops.
    double flush_spacing = 0.005;
};

/**
 * Ad hoc On-Demand Distance Vector agent: flooded RREQ with expanding-ring
 * TTLs, RREP unicast along reverse routes, RERR to precursors on link
 * breaks, sequence-numbered routing table. No hello messages, no local
 * repair; link breaks come solely from MAC retry exhaustion.
 */
class AodvAgent : public RoutingAgent {
public:
    struct RouteEntry {
        NodeId next_hop = 0;
        std::uint32_t hop_count = 0;
        std::uint32_t dest_seq = 0;
        bool seq_valid = false;
        bool valid = false;
        double expires_at = 0.0;
        std::set<NodeId> precursors;
    };

    AodvAgent(Network& net, NodeId self, const AodvConfig& cfg);

    void start() override;
    void originate(Packet pkt) override;
    void handle(Packet pkt, NodeId from) override;
    void on_link_failure(NodeId next_hop, Packet pkt) override;
    std::map<NodeId, NodeId> next_hop_snapshot() const override;
    std::uint64_t buffered_cbr() const override;

    /// Table entry for tests; nullptr when absent.
    const RouteEntry* route(NodeId dest) const;

private:
    struct Discovery {
        std::uint32_t attempt = 0;
        EventId timer = 0;
    };

    RouteEntry* valid_route(NodeId dest);
    void set_seq(RouteEntry& e, std::uint32_t seq);
    void maybe_adopt(NodeId dest, NodeId via, std::uint32_t hop_count,
                     std::uint32_t seq, bool seq_valid);
    void forward_data(Packet pkt, RouteEntry& e);
    void start_discovery(NodeId dst);
    void discovery_timeout(NodeId dst);
    void flush_buffer(NodeId dst);
    void flush_step(NodeId dst);
    void fail_discovery(NodeId dst);
    void housekeeping();

    void handle_data(Packet pkt, NodeId from);
    void handle_rreq(const AodvRreq& r, NodeId from);
    void handle_rrep(AodvRrep r, NodeId from);
    void handle_rerr(const AodvRerr& r, NodeId from);
    void send_rerr(const std::vector<std::pair<NodeId, std::uint32_t>>& lost,
                   const std::set<NodeId>& precursors);

    AodvConfig cfg_;
    std::map<NodeId, RouteEntry> table_;
    std::uint32_t own_seq_ = 0;
    std::uint32_t next_bid_ = 0;
    std::set<std::pair<NodeId, std::uint32_t>> seen_rreq_;
    std::map<NodeId, Discovery> discoveries_;
    std::map<NodeId, std::deque<BufferedPacket>> buffer_;
    std::set<NodeId> draining_;
};

} // namespace manet

#endif // MANET_AODV_HPP
