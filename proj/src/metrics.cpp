#include "manet/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace manet {

const char* to_string(RecKind k) {
    switch (k) {
    case RecKind::Send: return "SEND";
    case RecKind::Recv: return "RECV";
    case RecKind::Fwd: return "FWD";
    case RecKind::Drop: return "DROP";
    case RecKind::Ctrl: return "CTRL";
    }
    return "?";
}

const char* to_string(DropReason r) {
    switch (r) {
    case DropReason::None: return "";
    case DropReason::Ifq: return "IFQ";
    case DropReason::Collision: return "COLLISION";
    case DropReason::Retry: return "RETRY";
    case DropReason::NoRoute: return "NO_ROUTE";
    case DropReason::Ttl: return "TTL";
    case DropReason::Corrupt: return "CORRUPT";
    }
    return "?";
}

namespace {

std::uint32_t cbr_payload(const Packet& pkt) {
    if (const auto* d = std::get_if<CbrData>(&pkt.body)) return d->payload_bytes;
    return 0;
}

RecKind parse_kind(const std::string& s) {
    if (s == "SEND") return RecKind::Send;
    if (s == "RECV") return RecKind::Recv;
    if (s == "FWD") return RecKind::Fwd;
    if (s == "DROP") return RecKind::Drop;
    if (s == "CTRL") return RecKind::Ctrl;
    throw std::runtime_error("parse_trace: unknown record kind '" + s + "'");
}

PacketType parse_type(const std::string& s) {
    if (s == "cbr") return PacketType::Cbr;
    if (s == "aodv-ctl") return PacketType::AodvCtl;
    if (s == "dsr-ctl") return PacketType::DsrCtl;
    if (s == "dsdv-ctl") return PacketType::DsdvCtl;
    throw std::runtime_error("parse_trace: unknown packet type '" + s + "'");
}

DropReason parse_reason(const std::string& s) {
    if (s.empty()) return DropReason::None;
    if (s == "IFQ") return DropReason::Ifq;
    if (s == "COLLISION") return DropReason::Collision;
    if (s == "RETRY") return DropReason::Retry;
    if (s == "NO_ROUTE") return DropReason::NoRoute;
    if (s == "TTL") return DropReason::Ttl;
    if (s == "CORRUPT") return DropReason::Corrupt;
    throw std::runtime_error("parse_trace: unknown drop reason '" + s + "'");
}

} // namespace

void Recorder::push(double t, RecKind k, NodeId node, const Packet& pkt,
                    DropReason reason) {
    records_.push_back(TraceRecord{t, k, node, pkt.uid, pkt.type, pkt.src,
                                   pkt.dst, pkt.size_bytes, pkt.hops, reason});
}

void Recorder::send(double t, NodeId node, const Packet& pkt) {
    push(t, RecKind::Send, node, pkt, DropReason::None);
    if (pkt.type == PacketType::Cbr) ++sent_;
}

void Recorder::recv(double t, NodeId node, const Packet& pkt) {
    push(t, RecKind::Recv, node, pkt, DropReason::None);
    if (pkt.type == PacketType::Cbr) {
        ++recv_;
        recv_payload_bytes_ += cbr_payload(pkt);
        delay_sum_ += t - pkt.origin_time;
    }
}

void Recorder::fwd(double t, NodeId node, const Packet& pkt) {
    push(t, RecKind::Fwd, node, pkt, DropReason::None);
}

void Recorder::drop(double t, NodeId node, const Packet& pkt,
                    DropReason reason) {
    push(t, RecKind::Drop, node, pkt, reason);
    if (pkt.type == PacketType::Cbr) ++dropped_;
    // A DSR route error may carry a data packet back to its origin; losing
    // the error loses that packet as well.
    if (const auto* e = std::get_if<DsrRerr>(&pkt.body); e && e->data) {
        Packet inner;
        inner.uid = e->data->uid;
        inner.type = PacketType::Cbr;
        inner.src = e->data->src;
        inner.dst = e->data->dst;
        inner.origin_time = e->data->origin_time;
        inner.hops = e->data->hops;
        inner.size_bytes = e->data->payload_bytes;
        inner.body = CbrData{e->data->payload_bytes, {}, 0, e->data->salvage_count};
        push(t, RecKind::Drop, node, inner, reason);
        ++dropped_;
    }
}

void Recorder::ctrl(double t, NodeId node, const Packet& pkt) {
    push(t, RecKind::Ctrl, node, pkt, DropReason::None);
    ++ctrl_;
}

std::string Recorder::serialize() const {
    std::string out = "time,kind,node,pkt_uid,pkt_type,src,dst,size,hops,reason\n";
    char buf[192];
    for (const auto& r : records_) {
        std::snprintf(buf, sizeof buf, "%.6f,%s,%u,%llu,%s,%u,%u,%u,%d,%s\n",
                      r.time, to_string(r.kind), r.node,
                      static_cast<unsigned long long>(r.pkt_uid),
                      to_string(r.pkt_type), r.src, r.dst, r.size, r.hops,
                      to_string(r.reason));
        out += buf;
    }
    return out;
}

RunMetrics Recorder::finalize(double duration) const {
    RunMetrics m;
    m.sent = sent_;
    m.received = recv_;
    m.dropped = dropped_;
    m.control_packets = ctrl_;
    m.pdf = sent_ == 0 ? 0.0
                       : static_cast<double>(recv_) / static_cast<double>(sent_);
    if (recv_ > 0) m.avg_delay = delay_sum_ / static_cast<double>(recv_);
    m.throughput_kbps =
        static_cast<double>(recv_payload_bytes_) * 8.0 / 1000.0 / duration;
    m.invariant_violations = violations_;
    return m;
}

double pdf(const std::vector<TraceRecord>& trace) {
    std::uint64_t sent = 0, recv = 0;
    for (const auto& r : trace) {
        if (r.pkt_type != PacketType::Cbr) continue;
        if (r.kind == RecKind::Send) ++sent;
        if (r.kind == RecKind::Recv) ++recv;
    }
    return sent == 0 ? 0.0 : static_cast<double>(recv) / static_cast<double>(sent);
}

std::optional<double> avg_delay(const std::vector<TraceRecord>& trace) {
    // send times by uid, then mean over deliveries
    double sum = 0.0;
    std::uint64_t n = 0;
    std::unordered_map<std::uint64_t, double> send_at;
    for (const auto& r : trace) {
        if (r.pkt_type != PacketType::Cbr) continue;
        if (r.kind == RecKind::Send) send_at[r.pkt_uid] = r.time;
        if (r.kind == RecKind::Recv) {
            auto it = send_at.find(r.pkt_uid);
            if (it == send_at.end())
                throw std::runtime_error("avg_delay: RECV without SEND");
            sum += r.time - it->second;
            ++n;
        }
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

double throughput_kbps(const std::vector<TraceRecord>& trace, double duration) {
    if (duration <= 0.0) throw std::invalid_argument("throughput: duration <= 0");
    std::uint64_t bytes = 0;
    for (const auto& r : trace) {
        if (r.pkt_type == PacketType::Cbr && r.kind == RecKind::Recv)
            bytes += r.size;
    }
    return static_cast<double>(bytes) * 8.0 / 1000.0 / duration;
}

std::vector<TraceRecord> parse_trace(const std::string& text) {
    std::vector<TraceRecord> out;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) { header = false; continue; }
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::size_t start = 0;
        for (;;) {
            std::size_t pos = line.find(',', start);
            if (pos == std::string::npos) { f.push_back(line.substr(start)); break; }
            f.push_back(line.substr(start, pos - start));
            start = pos + 1;
        }
        if (f.size() != 10) throw std::runtime_error("parse_trace: bad field count");
        TraceRecord r;
        r.time = std::stod(f[0]);
        r.kind = parse_kind(f[1]);
        r.node = static_cast<NodeId>(std::stoul(f[2]));
        r.pkt_uid = std::stoull(f[3]);
        r.pkt_type = parse_type(f[4]);
        r.src = static_cast<NodeId>(std::stoul(f[5]));
        r.dst = static_cast<NodeId>(std::stoul(f[6]));
        r.size = static_cast<std::uint32_t>(std::stoul(f[7]));
        r.hops = std::stoi(f[8]);
        r.reason = parse_reason(f[9]);
        out.push_back(r);
    }
    return out;
}

Aggregate aggregate(const std::vector<double>& values) {
    Aggregate a;
    a.n = values.size();
    if (a.n == 0) return a;
    double sum = 0.0;
    for (double v : values) sum += v;
    a.mean = sum / static_cast<double>(a.n);
    if (a.n > 1) {
        double sq = 0.0;
        for (double v : values) sq += (v - a.mean) * (v - a.mean);
        a.stddev = std::sqrt(sq / static_cast<double>(a.n - 1));
    }
    return a;
}

AggregatedMetrics aggregate(const std::vector<RunMetrics>& runs) {
    if (runs.empty()) throw std::invalid_argument("aggregate: no runs");
    std::vector<double> pdfs, delays, tps;
    for (const auto& r : runs) {
        pdfs.push_back(r.pdf);
        if (r.avg_delay) delays.push_back(*r.avg_delay);
        tps.push_back(r.throughput_kbps);
    }
    AggregatedMetrics m;
    m.pdf = aggregate(pdfs);
    m.delay = aggregate(delays);
    m.throughput = aggregate(tps);
    return m;
}

} // namespace manet
