#ifndef MANET_METRICS_HPP
#define MANET_METRICS_HPP

#include "manet/packet.hpp"
#include "manet/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace manet {

enum class RecKind { Send, Recv, Fwd, Drop, Ctrl };
enum class DropReason { None, Ifq, Collision, Retry, NoRoute, Ttl, Corrupt };

const char* to_string(RecKind k);
const char* to_string(DropReason r);

struct TraceRecord {
    double time = 0.0;
    RecKind kind = RecKind::Send;
    NodeId node = 0;
    std::uint64_t pkt_uid = 0;
    PacketType pkt_type = PacketType::Cbr;
    NodeId src = 0;
    NodeId dst = 0;
    std::uint32_t size = 0;
    int hops = 0;
    DropReason reason = DropReason::None;
};

struct RunMetrics {
    std::uint64_t sent = 0;     // CBR packets originated
    std::uint64_t received = 0; // CBR packets delivered to final destination
    std::uint64_t dropped = 0;  // CBR packets dropped anywhere
    std::uint64_t control_packets = 0; // control transmissions (per hop)
    double pdf = 0.0;
    std::optional<double> avg_delay; // absent when nothing was delivered
    double throughput_kbps = 0.0;
    std::uint64_t invariant_violations = 0;
};

/**
 * Per-run trace recorder. Keeps every record for serialization and
 * maintains online CBR counters so metrics fall out without a second pass.
 */
class Recorder {
public:
    void send(double t, NodeId node, const Packet& pkt);
    void recv(double t, NodeId node, const Packet& pkt);
    void fwd(double t, NodeId node, const Packet& pkt);
    void drop(double t, NodeId node, const Packet& pkt, DropReason reason);
    void ctrl(double t, NodeId node, const Packet& pkt);

    void count_violation(std::uint64_t n = 1) { violations_ += n; }

    const std::vector<TraceRecord>& records() const { return records_; }

    /// CSV serialization, header line included, times with 6 decimals.
    std::string serialize() const;

    RunMetrics finalize(double duration) const;

private:
    void push(double t, RecKind k, NodeId node, const Packet& pkt,
              DropReason reason);

    std::vector<TraceRecord> records_;
    std::uint64_t sent_ = 0;
    std::uint64_t recv_ = 0;
    std::uint64_t dropped_ = 0;
    std::uint64_t ctrl_ = 0;
    std::uint64_t recv_payload_bytes_ = 0;
    double delay_sum_ = 0.0;
    std::uint64_t violations_ = 0;
};

// Pure analysis over trace records (the post-processing-script equivalent).
double pdf(const std::vector<TraceRecord>& trace);
std::optional<double> avg_delay(const std::vector<TraceRecord>& trace);
double throughput_kbps(const std::vector<TraceRecord>& trace, double duration);

/// Parse the serialized trace format back into records.
std::vector<TraceRecord> parse_trace(const std::string& text);

struct Aggregate {
    double mean = 0.0;
    double stddev = 0.0; // sample (n-1); 0 for a single value
    std::size_t n = 0;
};

Aggregate aggregate(const std::vector<double>& values);

struct AggregatedMetrics {
    Aggregate pdf;
    Aggregate delay; // over runs that delivered anything
    Aggregate throughput;
};

/// Mean / sample stddev per metric; throws std::invalid_argument on empty.
AggregatedMetrics aggregate(const std::vector<RunMetrics>& runs);

} // namespace manet

#endif // MANET_METRICS_HPP
