#ifndef MANET_DSDV_HPP
#define MANET_DSDV_HPP

#include "manet/routing.hpp"

#include <map>

namespace manet {

struct DsdvConfig {
    double update_interval = 15.0;
    std::uint32_t full_dump_every = 3; // intervals
    double settling_time = 6.0;        // adopt now, advertise later
    double triggered_min_gap = 1.0;    // per-node rate limit
    double jitter = 1.0;               // uniform[0, jitter] per broadcast
};

/**
 * Destination-Sequenced Distance Vector agent: proactive Bellman-Ford
 * tables with per-destination sequence numbers (even = valid, odd =
 * broken), periodic full dumps with incremental updates in between,
 * settling-time damping, and triggered updates on topology changes. No
 * packet buffering: data is forwarded or dropped on the spot.
 */
class DsdvAgent : public RoutingAgent {
public:
    struct Entry {
        NodeId next_hop = 0;
        std::uint32_t metric = kInfMetric;
        std::uint32_t seq = 0;
        double installed_at = 0.0;
        double settling_until = 0.0;
        // last advertised state; settling holds advertisement back
        std::uint32_t adv_metric = kInfMetric;
        std::uint32_t adv_seq = 0;
        bool advertised_once = false;
        bool changed = false; // since the last update we sent
    };

    DsdvAgent(Network& net, NodeId self, const DsdvConfig& cfg);

    void start() override;
    void originate(Packet pkt) override;
    void handle(Packet pkt, NodeId from) override;
    void on_link_failure(NodeId next_hop, Packet pkt) override;
    std::map<NodeId, NodeId> next_hop_snapshot() const override;

    /// Table entry for tests; nullptr when unknown.
    const Entry* entry(NodeId dest) const;

    std::uint32_t own_seq() const { return own_seq_; }

private:
    void periodic_update();
    void broadcast_update(bool full_dump);
    void schedule_triggered();
    void set_entry_seq(Entry& e, std::uint32_t seq);
    Entry* usable_route(NodeId dest);
    void handle_update(const DsdvUpdate& u, NodeId from);
    void forward_data(Packet pkt);

    DsdvConfig cfg_;
    std::map<NodeId, Entry> table_; // excludes self
    std::uint32_t own_seq_ = 0;     // even
    std::uint32_t intervals_ = 0;
    double last_broadcast_ = -1e9;
    bool trigger_pending_ = false;
};

} // namespace manet

#endif // MANET_DSDV_HPP
