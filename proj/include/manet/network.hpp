#ifndef MANET_NETWORK_HPP
#define MANET_NETWORK_HPP

#include "manet/engine.hpp"
#include "manet/metrics.hpp"
#include "manet/packet.hpp"
#include "manet/types.hpp"

#include <string>

namespace manet {

struct MacConfig;

/**
 * Services the MAC and routing agents need from the surrounding simulation.
 * Implemented by Simulation; kept abstract so modules stay testable in
 * isolation.
 */
class Network {
public:
    virtual ~Network() = default;

    virtual Engine& engine() = 0;
    virtual Recorder& recorder() = 0;
    virtual const MacConfig& mac_config() const = 0;
    virtual std::uint32_t node_count() const = 0;
    virtual Vec2 position_of(NodeId node, double t) = 0;

    /// Agent -> MAC: enqueue a packet for next_hop (kBroadcast to flood).
    virtual void mac_send(NodeId from, const Packet& pkt, NodeId next_hop) = 0;

    /// MAC -> agent: frame arrived at `to` from neighbor `from`.
    virtual void deliver(NodeId to, Packet pkt, NodeId from) = 0;

    /// MAC -> agent: unicast retries exhausted toward next_hop.
    virtual void link_failed(NodeId at, NodeId next_hop, const Packet& pkt) = 0;

    /// Records the loss of a packet (and of any data embedded in it).
    virtual void packet_lost(NodeId at, const Packet& pkt, DropReason r) = 0;

    virtual std::uint64_t next_uid() = 0;
    virtual RngStream& rng(const std::string& label) = 0;
};

} // namespace manet

#endif // MANET_NETWORK_HPP
