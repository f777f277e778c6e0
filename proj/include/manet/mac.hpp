#ifndef MANET_MAC_HPP
#define MANET_MAC_HPP

#include "manet/network.hpp"
#include "manet/packet.hpp"
#include "manet/types.hpp"

#include <deque>
#include <map>
#include <optional>
#include <vector>

namespace manet {

struct MacConfig {
    double range = 250.0;       // unit-disk radius, meters
    // Carrier-sense range, wider than the communication range so most hidden
    // terminals defer instead of colliding, while senders farther apart
    // still reuse the channel. 1.8x the communication range measured best:
    // wider wastes spatial reuse, narrower collides too often.
    double cs_range = 450.0;
    double bitrate = 2e6;       // bits/s
    double slot = 20e-6;        // backoff slot, seconds
    double difs = 50e-6;        // fixed deferral before each attempt
    std::uint32_t cw_min = 32;  // contention window, slots
    std::uint32_t cw_max = 1024;
    std::uint32_t retry_limit = 7;
    std::size_t ifq_len = 50;
    std::uint32_t header_overhead = 58; // MAC+IP framing bytes per frame
    // Optional: routing control frames jump ahead of queued data frames
    // (data stays FIFO among itself). Off by default; under saturation it
    // lets discovery floods crowd out the data they were meant to serve.
    bool control_priority = false;

    // Test hooks for oracle runs: deterministic zero backoff and an ideal
    // collision-free channel isolate routing logic from MAC loss.
    bool zero_backoff = false;
    bool ignore_collisions = false;
};

struct Frame {
    Packet pkt;
    NodeId next_hop = kBroadcast;
    std::uint32_t retries = 0;
};

/// Nodes within Euclidean distance `range` of `node`, excluding itself.
std::vector<NodeId> neighbors(const std::map<NodeId, Vec2>& positions,
                              NodeId node, double range);

/**
 * Shared wireless channel bookkeeping: which transmissions are (or recently
 * were) on the air, for carrier sensing and collision resolution. Sender
 * positions are frozen at transmission start.
 */
class Medium {
public:
    struct Transmission {
        std::uint64_t id;
        NodeId sender;
        Vec2 pos;
        double start;
        double end;
    };

    std::uint64_t add(NodeId sender, Vec2 pos, double start, double end);

    /// Latest end time among transmissions audible at `pos` that are on the
    /// air strictly inside their interval at `now`; nullopt if channel idle.
    std::optional<double> busy_until(const Vec2& pos, double now,
                                     double range) const;

    /// True iff the frame of `tx_id` is lost at a receiver: some other
    /// in-range transmission overlaps it there, or the receiver itself was
    /// transmitting.
    bool lost_at(std::uint64_t tx_id, NodeId receiver, const Vec2& receiver_pos,
                 double range) const;

    const std::vector<Transmission>& transmissions() const { return txs_; }

    std::uint64_t total_tx() const { return next_id_; }
    double total_airtime() const { return total_airtime_; }

private:
    std::uint64_t next_id_ = 0;
    double total_airtime_ = 0.0;
    std::vector<Transmission> txs_;
};

/**
 * Per-node 802.11-style MAC: bounded FIFO interface queue, carrier sense,
 * random slotted backoff, binary exponential retry for unicast with
 * link-failure notification, no ack airtime modeled.
 */
class Mac {
public:
    Mac(Network& net, Medium& medium, NodeId self, const MacConfig& cfg);

    /// Enqueue for transmission; a full queue drops the packet (recorded).
    void send(Packet pkt, NodeId next_hop);

    std::size_t queue_len() const { return queue_.size(); }

    /// CBR packets currently held here (queued directly or embedded in a
    /// queued DSR route error); used by the conservation check.
    std::uint64_t cbr_held() const;

private:
    void maybe_start();
    void attempt();
    void begin_tx();
    void end_tx(std::uint64_t tx_id, double tx_start);
    double frame_airtime(const Frame& f) const;

    Network& net_;
    Medium& medium_;
    NodeId self_;
    const MacConfig& cfg_;
    std::deque<Frame> queue_;
    bool busy_ = false; // head frame is in its sense/backoff/tx cycle
    std::uint32_t cw_;
};

} // namespace manet

#endif // MANET_MAC_HPP
