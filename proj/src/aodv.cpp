#include "manet/aodv.hpp"

#include <algorithm>

namespace manet {

namespace {

Packet make_ctl(Network& net, NodeId self, NodeId dst, PacketBody body) {
    Packet p;
    p.uid = net.next_uid();
    p.type = PacketType::AodvCtl;
    p.src = self;
    p.dst = dst;
    p.origin_time = net.engine().now();
    p.size_bytes = packet_wire_size(body);
    p.body = std::move(body);
    return p;
}

} // namespace

AodvAgent::AodvAgent(Network& net, NodeId self, const AodvConfig& cfg)
    : RoutingAgent(net, self), cfg_(cfg) {}

void AodvAgent::start() {
    net_.engine().schedule(now() + 1.0, EventKind::Timer, self_,
                           [this] { housekeeping(); });
}

void AodvAgent::housekeeping() {
    // expire over-age buffered packets
    for (auto it = buffer_.begin(); it != buffer_.end();) {
        auto& q = it->second;
        while (!q.empty() && q.front().deadline <= now()) {
            net_.packet_lost(self_, q.front().pkt, DropReason::NoRoute);
            q.pop_front();
        }
        it = q.empty() && !discoveries_.count(it->first) ? buffer_.erase(it)
                                                         : std::next(it);
    }
    net_.engine().schedule(now() + 1.0, EventKind::Timer, self_,
                           [this] { housekeeping(); });
}

AodvAgent::RouteEntry* AodvAgent::valid_route(NodeId dest) {
    auto it = table_.find(dest);
    if (it == table_.end()) return nullptr;
    RouteEntry& e = it->second;
    if (e.valid && e.expires_at <= now()) e.valid = false; // lazy expiry
    return e.valid ? &e : nullptr;
}

const AodvAgent::RouteEntry* AodvAgent::route(NodeId dest) const {
    auto it = table_.find(dest);
    return it == table_.end() ? nullptr : &it->second;
}

void AodvAgent::set_seq(RouteEntry& e, std::uint32_t seq) {
    if (e.seq_valid && seq < e.dest_seq) {
        net_.recorder().count_violation();
        return;
    }
    e.dest_seq = seq;
    e.seq_valid = true;
}

void AodvAgent::maybe_adopt(NodeId dest, NodeId via, std::uint32_t hop_count,
                            std::uint32_t seq, bool seq_valid) {
    if (dest == self_) return;
    RouteEntry& e = table_[dest];
    if (e.seq_valid && seq_valid && seq < e.dest_seq) return; // stale info
    bool fresher = !e.seq_valid || (seq_valid && seq > e.dest_seq);
    bool equal_shorter =
        e.seq_valid && seq_valid && seq == e.dest_seq && hop_count < e.hop_count;
    if (!e.valid || fresher || equal_shorter) {
        e.next_hop = via;
        e.hop_count = hop_count;
        if (seq_valid) set_seq(e, seq);
        e.valid = true;
        e.expires_at = now() + cfg_.active_route_timeout;
    } else if (e.valid && seq_valid && seq == e.dest_seq &&
               e.next_hop == via) {
        e.expires_at = std::max(e.expires_at, now() + cfg_.active_route_timeout);
    }
}

void AodvAgent::originate(Packet pkt) {
    if (pkt.dst == self_) {
        deliver_local(pkt);
        return;
    }
    if (RouteEntry* e = valid_route(pkt.dst)) {
        e->expires_at = std::max(e->expires_at, now() + cfg_.active_route_timeout);
        unicast(pkt, e->next_hop);
        return;
    }
    NodeId dst = pkt.dst;
    auto& q = buffer_[dst];
    if (q.size() >= cfg_.buffer_cap) {
        net_.packet_lost(self_, pkt, DropReason::NoRoute);
    } else {
        q.push_back(BufferedPacket{std::move(pkt), now() + cfg_.buffer_ttl});
    }
    if (!discoveries_.count(dst)) start_discovery(dst);
}

void AodvAgent::start_discovery(NodeId dst) {
    Discovery& d = discoveries_[dst];
    std::uint32_t ttl = d.attempt < cfg_.ring_ttls.size()
                            ? cfg_.ring_ttls[d.attempt]
                            : cfg_.net_ttl;
    ++own_seq_;
    AodvRreq r;
    r.broadcast_id = next_bid_++;
    r.origin = self_;
    r.dest = dst;
    r.origin_seq = own_seq_;
    if (auto it = table_.find(dst); it != table_.end() && it->second.seq_valid) {
        r.dest_seq_known = it->second.dest_seq;
        r.dest_seq_valid = true;
    }
    r.hop_count = 0;
    r.ttl = ttl;
    seen_rreq_.insert({self_, r.broadcast_id});
    broadcast(make_ctl(net_, self_, kBroadcast, r));
    double timeout = 2.0 * cfg_.node_traversal * ttl;
    d.timer = net_.engine().schedule(now() + timeout, EventKind::Timer, self_,
                                     [this, dst] { discovery_timeout(dst); });
}

void AodvAgent::discovery_timeout(NodeId dst) {
    if (valid_route(dst)) { // a route appeared through other traffic
        discoveries_.erase(dst);
        flush_buffer(dst);
        return;
    }
    auto it = discoveries_.find(dst);
    if (it == discoveries_.end()) return;
    std::uint32_t max_attempts = static_cast<std::uint32_t>(
        cfg_.ring_ttls.size() + 1 + cfg_.net_retries);
    if (++it->second.attempt >= max_attempts) {
        fail_discovery(dst);
        return;
    }
    start_discovery(dst);
}

void AodvAgent::fail_discovery(NodeId dst) {
    discoveries_.erase(dst);
    auto it = buffer_.find(dst);
    if (it == buffer_.end()) return;
    for (auto& b : it->second) {
        net_.packet_lost(self_, b.pkt, DropReason::NoRoute);
    }
    buffer_.erase(it);
}

void AodvAgent::flush_buffer(NodeId dst) {
    if (draining_.count(dst)) return;
    flush_step(dst);
}

// Drain one buffered packet per step so a long-buffered burst does not
// overwhelm the interface queue.
void AodvAgent::flush_step(NodeId dst) {
    draining_.erase(dst);
    auto it = buffer_.find(dst);
    if (it == buffer_.end()) return;
    if (it->second.empty()) {
        if (!discoveries_.count(dst)) buffer_.erase(it);
        return;
    }
    RouteEntry* e = valid_route(dst);
    if (!e) { // route fell over mid-drain: go back to discovering
        if (!discoveries_.count(dst)) start_discovery(dst);
        return;
    }
    Packet pkt = std::move(it->second.front().pkt);
    it->second.pop_front();
    forward_data(std::move(pkt), *e);
    if (it->second.empty()) {
        if (!discoveries_.count(dst)) buffer_.erase(it);
        return;
    }
    draining_.insert(dst);
    net_.engine().schedule(now() + cfg_.flush_spacing, EventKind::Timer, self_,
                           [this, dst] { flush_step(dst); });
}

void AodvAgent::forward_data(Packet pkt, RouteEntry& e) {
    e.expires_at = std::max(e.expires_at, now() + cfg_.active_route_timeout);
    unicast(std::move(pkt), e.next_hop);
}

void AodvAgent::handle(Packet pkt, NodeId from) {
    if (std::holds_alternative<CbrData>(pkt.body)) {
        handle_data(std::move(pkt), from);
    } else if (const auto* rreq = std::get_if<AodvRreq>(&pkt.body)) {
        handle_rreq(*rreq, from);
    } else if (const auto* rrep = std::get_if<AodvRrep>(&pkt.body)) {
        handle_rrep(*rrep, from);
    } else if (const auto* rerr = std::get_if<AodvRerr>(&pkt.body)) {
        handle_rerr(*rerr, from);
    }
}

void AodvAgent::handle_data(Packet pkt, NodeId from) {
    if (pkt.dst == self_) {
        deliver_local(pkt);
        return;
    }
    if (RouteEntry* e = valid_route(pkt.dst)) {
        e->precursors.insert(from);
        net_.recorder().fwd(now(), self_, pkt);
        forward_data(std::move(pkt), *e);
        return;
    }
    // no route at an intermediate hop: report back and drop
    std::uint32_t seq = 0;
    if (auto it = table_.find(pkt.dst); it != table_.end()) {
        seq = it->second.dest_seq + 1;
    }
    AodvRerr err;
    err.unreachable.push_back({pkt.dst, seq});
    unicast(make_ctl(net_, self_, from, err), from);
    net_.packet_lost(self_, pkt, DropReason::NoRoute);
}

void AodvAgent::handle_rreq(const AodvRreq& r, NodeId from) {
    if (r.origin == self_) return;
    if (!seen_rreq_.insert({r.origin, r.broadcast_id}).second) return;

    maybe_adopt(r.origin, from, r.hop_count + 1, r.origin_seq, true);

    if (r.dest == self_) {
        if (r.dest_seq_valid) own_seq_ = std::max(own_seq_, r.dest_seq_known);
        AodvRrep rep;
        rep.origin = r.origin;
        rep.dest = self_;
        rep.dest_seq = own_seq_;
        rep.hop_count = 0;
        rep.lifetime = cfg_.active_route_timeout;
        unicast(make_ctl(net_, self_, r.origin, rep), from);
        return;
    }

    if (RouteEntry* e = valid_route(r.dest)) {
        if (e->seq_valid && (!r.dest_seq_valid || e->dest_seq >= r.dest_seq_known)) {
            e->precursors.insert(from);
            AodvRrep rep;
            rep.origin = r.origin;
            rep.dest = r.dest;
            rep.dest_seq = e->dest_seq;
            rep.hop_count = e->hop_count;
            rep.lifetime = std::max(0.0, e->expires_at - now());
            unicast(make_ctl(net_, self_, r.origin, rep), from);
            return;
        }
    }

    if (r.ttl <= 1) return; // ring boundary
    AodvRreq fwd = r;
    fwd.hop_count += 1;
    fwd.ttl -= 1;
    if (cfg_.fwd_jitter <= 0.0) {
        broadcast(make_ctl(net_, self_, kBroadcast, fwd));
        return;
    }
    double delay = net_.rng("protocol").uniform(0.0, cfg_.fwd_jitter);
    net_.engine().schedule(now() + delay, EventKind::Timer, self_,
                           [this, fwd] {
                               broadcast(make_ctl(net_, self_, kBroadcast, fwd));
                           });
}

void AodvAgent::handle_rrep(AodvRrep r, NodeId from) {
    maybe_adopt(r.dest, from, r.hop_count + 1, r.dest_seq, true);

    if (r.origin == self_) {
        if (auto it = discoveries_.find(r.dest); it != discoveries_.end()) {
            net_.engine().cancel(it->second.timer);
            discoveries_.erase(it);
        }
        flush_buffer(r.dest);
        return;
    }
    RouteEntry* rev = valid_route(r.origin);
    if (!rev) return; // reverse route gone: silently dropped
    if (auto it = table_.find(r.dest); it != table_.end()) {
        it->second.precursors.insert(rev->next_hop);
    }
    r.hop_count += 1;
    unicast(make_ctl(net_, self_, r.origin, r), rev->next_hop);
}

void AodvAgent::handle_rerr(const AodvRerr& r, NodeId from) {
    std::vector<std::pair<NodeId, std::uint32_t>> lost;
    std::set<NodeId> precursors;
    for (const auto& [dest, seq] : r.unreachable) {
        auto it = table_.find(dest);
        if (it == table_.end()) continue;
        RouteEntry& e = it->second;
        if (!e.valid || e.next_hop != from) continue;
        e.valid = false;
        set_seq(e, std::max(e.dest_seq, seq));
        lost.push_back({dest, e.dest_seq});
        precursors.insert(e.precursors.begin(), e.precursors.end());
        e.precursors.clear();
    }
    if (!lost.empty()) send_rerr(lost, precursors);
}

void AodvAgent::on_link_failure(NodeId next_hop, Packet pkt) {
    std::vector<std::pair<NodeId, std::uint32_t>> lost;
    std::set<NodeId> precursors;
    for (auto& [dest, e] : table_) {
        if (!e.valid || e.next_hop != next_hop) continue;
        e.valid = false;
        set_seq(e, e.dest_seq + 1);
        lost.push_back({dest, e.dest_seq});
        precursors.insert(e.precursors.begin(), e.precursors.end());
        e.precursors.clear();
    }
    if (!lost.empty()) send_rerr(lost, precursors);
    if (pkt.type == PacketType::Cbr) {
        net_.packet_lost(self_, pkt, DropReason::Retry);
    }
}

void AodvAgent::send_rerr(
    const std::vector<std::pair<NodeId, std::uint32_t>>& lost,
    const std::set<NodeId>& precursors) {
    if (precursors.empty()) return;
    AodvRerr err;
    err.unreachable = lost;
    for (NodeId p : precursors) {
        unicast(make_ctl(net_, self_, p, err), p);
    }
}

std::map<NodeId, NodeId> AodvAgent::next_hop_snapshot() const {
    std::map<NodeId, NodeId> out;
    double t = net_.engine().now();
    for (const auto& [dest, e] : table_) {
        if (e.valid && e.expires_at > t) out[dest] = e.next_hop;
    }
    return out;
}

std::uint64_t AodvAgent::buffered_cbr() const {
    std::uint64_t n = 0;
    for (const auto& [dst, q] : buffer_) {
        for (const auto& b : q) {
            if (b.pkt.type == PacketType::Cbr) ++n;
        }
    }
    return n;
}

} // namespace manet
