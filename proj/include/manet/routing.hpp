#ifndef MANET_ROUTING_HPP
#define MANET_ROUTING_HPP

#include "manet/network.hpp"
#include "manet/packet.hpp"
#include "manet/types.hpp"

#include <deque>
#include <map>

namespace manet {

/// Common shape of the per-node routing agents. Agents receive application
/// packets via originate(), frames via handle(), and MAC retry-exhaustion
/// reports via on_link_failure(); everything else is protocol-specific.
class RoutingAgent {
public:
    RoutingAgent(Network& net, NodeId self) : net_(net), self_(self) {}
    virtual ~RoutingAgent() = default;

    virtual void start() {}
    virtual void originate(Packet pkt) = 0;
    virtual void handle(Packet pkt, NodeId from) = 0;
    virtual void on_link_failure(NodeId next_hop, Packet pkt) = 0;

    /// Valid next hop per destination, for loop-freedom snapshots.
    virtual std::map<NodeId, NodeId> next_hop_snapshot() const { return {}; }

    /// CBR packets buffered here awaiting a route (conservation check).
    virtual std::uint64_t buffered_cbr() const { return 0; }

    NodeId id() const { return self_; }

protected:
    double now() const { return net_.engine().now(); }
    void unicast(const Packet& pkt, NodeId next_hop) {
        if (pkt.type != PacketType::Cbr) {
            net_.recorder().ctrl(now(), self_, pkt);
        }
        net_.mac_send(self_, pkt, next_hop);
    }
    void broadcast(const Packet& pkt) { unicast(pkt, kBroadcast); }
    void deliver_local(const Packet& pkt) {
        net_.recorder().recv(now(), self_, pkt);
    }

    Network& net_;
    NodeId self_;
};

struct BufferedPacket {
    Packet pkt;
    double deadline;
    double buffered_at = 0.0;
};

} // namespace manet

#endif // MANET_ROUTING_HPP
