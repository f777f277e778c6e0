#ifndef MANET_PACKET_HPP
#define MANET_PACKET_HPP

#include "manet/types.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace manet {

enum class PacketType { Cbr, AodvCtl, DsrCtl, DsdvCtl };

const char* to_string(PacketType t);

// ── application payload ──

/// CBR data. For DSR the full source route is stamped into the header;
/// cursor indexes the hop currently holding the packet.
struct CbrData {
    std::uint32_t payload_bytes = 512;
    std::vector<NodeId> source_route; // empty for AODV/DSDV
    std::size_t cursor = 0;
    int salvage_count = 0;
};

// ── AODV control ──

struct AodvRreq {
    std::uint32_t broadcast_id = 0;
    NodeId origin = 0;
    NodeId dest = 0;
    std::uint32_t origin_seq = 0;
    std::uint32_t dest_seq_known = 0;
    bool dest_seq_valid = false;
    std::uint32_t hop_count = 0;
    std::uint32_t ttl = 0;
};

struct AodvRrep {
    NodeId origin = 0;
    NodeId dest = 0;
    std::uint32_t dest_seq = 0;
    std::uint32_t hop_count = 0;
    double lifetime = 0.0;
};

struct AodvRerr {
    std::vector<std::pair<NodeId, std::uint32_t>> unreachable; // (dest, seq)
};

// ── DSR control ──

struct DsrRreq {
    std::uint32_t request_id = 0;
    NodeId origin = 0;
    NodeId target = 0;
    std::vector<NodeId> route; // accumulated, begins with origin
};

struct DsrRrep {
    std::vector<NodeId> route;  // full origin..target path
    std::size_t rev_cursor = 0; // index of current holder, walks toward 0
};

/// Data carried back to the origin inside a DSR route error so it can be
/// re-originated (one salvage attempt).
struct DsrEmbeddedData {
    std::uint64_t uid = 0;
    NodeId src = 0;
    NodeId dst = 0;
    double origin_time = 0.0;
    int hops = 0;
    std::uint32_t payload_bytes = 512;
    int salvage_count = 0;
};

struct DsrRerr {
    NodeId broken_from = 0;
    NodeId broken_to = 0;
    std::vector<NodeId> back_route; // path from detector to origin
    std::size_t cursor = 0;         // index of current holder in back_route
    std::optional<DsrEmbeddedData> data;
};

// ── DSDV control ──

struct DsdvUpdate {
    struct Entry {
        NodeId dest;
        std::uint32_t metric; // kInfMetric = broken
        std::uint32_t seq;    // even = valid, odd = broken
    };
    NodeId origin = 0;
    bool full_dump = false;
    std::vector<Entry> entries;
};

inline constexpr std::uint32_t kInfMetric = 0xFFFFFFFFu;

using PacketBody = std::variant<CbrData, AodvRreq, AodvRrep, AodvRerr, DsrRreq,
                                DsrRrep, DsrRerr, DsdvUpdate>;

struct Packet {
    std::uint64_t uid = 0;
    PacketType type = PacketType::Cbr;
    NodeId src = 0; // application source / control originator
    NodeId dst = 0; // final destination (kBroadcast for floods)
    double origin_time = 0.0;
    int hops = 0;
    std::uint32_t size_bytes = 0;
    PacketBody body;
};

/// Wire size of a packet given its body (control sizes are fixed for
/// reproducibility; DSR adds 4 B per source-route hop to data packets).
std::uint32_t packet_wire_size(const PacketBody& body);

} // namespace manet

#endif // MANET_PACKET_HPP
