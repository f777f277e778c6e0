#ifndef MANET_DSR_HPP
#define MANET_DSR_HPP

#include "manet/routing.hpp"

#include <deque>
#include <map>
#include <set>
#include <vector>

namespace manet {

struct DsrConfig {
    // Generous multi-route bound: alternates make salvage resends instant
    // instead of forcing a fresh discovery after every link break.
    std::size_t cache_cap_per_dest = 32;
    // Cached routes go stale quickly under mobility; expire them so
    // intermediate nodes stop answering discoveries with dead paths.
    double cache_lifetime = 8.0;
    std::size_t buffer_cap = 64;
    double buffer_ttl = 30.0;
    double rreq_timeout = 0.5; // initial, doubles each retry
    std::uint32_t max_retries = 3;
    int salvage_limit = 1; // re-originations at the source per packet
    double fwd_jitter = 0.01; // RREQ rebroadcast delay, uniform[0, fwd_jitter]
    double flush_spacing = 0.005; // pending-buffer drain pacing
    // After a route error, refuse to re-learn routes over the failed link
    // for this long; cached copies elsewhere in the network would otherwise
    // feed the same dead link straight back.
    double broken_link_ttl = 3.0;
};

/**
 * Dynamic Source Routing agent: discovery accumulates the full path, a
 * bounded multi-route cache per destination, source-routed forwarding, and
 * RERR-driven cache pruning with one salvage attempt at the origin. No
 * promiscuous overhearing or intermediate salvaging.
 */
class DsrAgent : public RoutingAgent {
public:
    DsrAgent(Network& net, NodeId self, const DsrConfig& cfg);

    void start() override;
    void originate(Packet pkt) override;
    void handle(Packet pkt, NodeId from) override;
    void on_link_failure(NodeId next_hop, Packet pkt) override;
    std::uint64_t buffered_cbr() const override;

    /// Shortest cached route self..dest (ties: most recently inserted);
    /// empty when none cached. Exposed for tests.
    std::vector<NodeId> best_route(NodeId dest) const;

    std::size_t cache_size(NodeId dest) const;

private:
    struct CachedRoute {
        std::vector<NodeId> hops; // self .. dest
        std::uint64_t inserted_seq;
        double inserted_at;
    };
    struct Discovery {
        std::uint32_t attempt = 0;
        EventId timer = 0;
        double session_start = 0.0;
    };

    void insert_route(std::vector<NodeId> hops);
    void prune_link(NodeId a, NodeId b);
    bool crosses_broken_link(const std::vector<NodeId>& hops) const;
    void send_data(Packet pkt, const std::vector<NodeId>& route);
    void start_discovery(NodeId dst);
    void discovery_timeout(NodeId dst);
    void flush_buffer(NodeId dst);
    void flush_step(NodeId dst);
    void reoriginate(Packet pkt);
    void housekeeping();

    void handle_data(Packet pkt, NodeId from);
    void handle_rreq(const DsrRreq& r, NodeId from);
    void handle_rrep(DsrRrep r, NodeId from);
    void handle_rerr(DsrRerr r, NodeId from);

    DsrConfig cfg_;
    std::map<NodeId, std::vector<CachedRoute>> cache_;
    std::uint32_t next_request_id_ = 0;
    std::uint64_t insert_counter_ = 0;
    std::set<std::pair<NodeId, std::uint32_t>> seen_rreq_;
    std::map<NodeId, Discovery> discoveries_;
    std::map<NodeId, std::deque<BufferedPacket>> buffer_;
    std::set<NodeId> draining_;
    std::map<std::pair<NodeId, NodeId>, double> broken_until_;
};

} // namespace manet

#endif // MANET_DSR_HPP
