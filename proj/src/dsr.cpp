#include "manet/dsr.hpp"

#include <algorithm>

namespace manet {

namespace {

Packet make_ctl(Network& net, NodeId self, NodeId dst, PacketBody body) {
    Packet p;
    p.uid = net.next_uid();
    p.type = PacketType::DsrCtl;
    p.src = self;
    p.dst = dst;
    p.origin_time = net.engine().now();
    p.size_bytes = packet_wire_size(body);
    p.body = std::move(body);
    return p;
}

bool has_duplicate(const std::vector<NodeId>& hops) {
    std::set<NodeId> seen;
    for (NodeId n : hops) {
        if (!seen.insert(n).second) return true;
    }
    return false;
}

} // namespace

DsrAgent::DsrAgent(Network& net, NodeId self, const DsrConfig& cfg)
    : RoutingAgent(net, self), cfg_(cfg) {}

void DsrAgent::start() {
    net_.engine().schedule(now() + 1.0, EventKind::Timer, self_,
                           [this] { housekeeping(); });
}

void DsrAgent::housekeeping() {
    std::erase_if(broken_until_,
                  [this](const auto& kv) { return kv.second <= now(); });
    double cutoff = now() - cfg_.cache_lifetime;
    for (auto it = cache_.begin(); it != cache_.end();) {
        std::erase_if(it->second, [cutoff](const CachedRoute& r) {
            return r.inserted_at < cutoff;
        });
        it = it->second.empty() ? cache_.erase(it) : std::next(it);
    }
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

bool DsrAgent::crosses_broken_link(const std::vector<NodeId>& hops) const {
    for (std::size_t k = 0; k + 1 < hops.size(); ++k) {
        NodeId a = std::min(hops[k], hops[k + 1]);
        NodeId b = std::max(hops[k], hops[k + 1]);
        auto it = broken_until_.find({a, b});
        if (it != broken_until_.end() && it->second > now()) return true;
    }
    return false;
}

void DsrAgent::insert_route(std::vector<NodeId> hops) {
    if (hops.size() < 2 || hops.front() != self_) return;
    if (has_duplicate(hops)) {
        net_.recorder().count_violation();
        return;
    }
    if (crosses_broken_link(hops)) return;
    NodeId dest = hops.back();
    auto& routes = cache_[dest];
    // re-inserting a known route just refreshes its age
    for (auto it = routes.begin(); it != routes.end(); ++it) {
        if (it->hops == hops) {
            routes.erase(it);
            break;
        }
    }
    if (routes.size() >= cfg_.cache_cap_per_dest) {
        auto oldest = std::min_element(routes.begin(), routes.end(),
                                       [](const auto& a, const auto& b) {
                                           return a.inserted_seq < b.inserted_seq;
                                       });
        routes.erase(oldest);
    }
    routes.push_back(CachedRoute{std::move(hops), insert_counter_++, now()});
}

std::vector<NodeId> DsrAgent::best_route(NodeId dest) const {
    auto it = cache_.find(dest);
    if (it == cache_.end() || it->second.empty()) return {};
    double cutoff = now() - cfg_.cache_lifetime;
    const CachedRoute* best = nullptr;
    for (const auto& r : it->second) {
        if (r.inserted_at < cutoff) continue;
        if (!best || r.hops.size() < best->hops.size() ||
            (r.hops.size() == best->hops.size() &&
             r.inserted_seq > best->inserted_seq)) {
            best = &r;
        }
    }
    return best ? best->hops : std::vector<NodeId>{};
}

std::size_t DsrAgent::cache_size(NodeId dest) const {
    auto it = cache_.find(dest);
    return it == cache_.end() ? 0 : it->second.size();
}

void DsrAgent::prune_link(NodeId a, NodeId b) {
    broken_until_[{std::min(a, b), std::max(a, b)}] =
        now() + cfg_.broken_link_ttl;
    for (auto it = cache_.begin(); it != cache_.end();) {
        auto& routes = it->second;
        std::erase_if(routes, [&](const CachedRoute& r) {
            for (std::size_t k = 0; k + 1 < r.hops.size(); ++k) {
                if ((r.hops[k] == a && r.hops[k + 1] == b) ||
                    (r.hops[k] == b && r.hops[k + 1] == a)) {
                    return true;
                }
            }
            return false;
        });
        it = routes.empty() ? cache_.erase(it) : std::next(it);
    }
}

void DsrAgent::send_data(Packet pkt, const std::vector<NodeId>& route) {
    auto& d = std::get<CbrData>(pkt.body);
    d.source_route = route;
    d.cursor = 1; // receiver's index
    pkt.size_bytes = packet_wire_size(pkt.body);
    NodeId next = route[1];
    unicast(std::move(pkt), next);
}

void DsrAgent::originate(Packet pkt) {
    if (pkt.dst == self_) {
        deliver_local(pkt);
        return;
    }
    NodeId dst = pkt.dst;
    auto route = best_route(dst);
    if (!route.empty()) {
        send_data(std::move(pkt), route);
        return;
    }
    auto& q = buffer_[dst];
    if (q.size() >= cfg_.buffer_cap) {
        net_.packet_lost(self_, pkt, DropReason::NoRoute);
    } else {
        q.push_back(
            BufferedPacket{std::move(pkt), now() + cfg_.buffer_ttl, now()});
    }
    if (!discoveries_.count(dst)) start_discovery(dst);
}

void DsrAgent::start_discovery(NodeId dst) {
    Discovery& d = discoveries_[dst];
    if (d.attempt == 0) d.session_start = now();
    DsrRreq r;
    r.request_id = next_request_id_++;
    r.origin = self_;
    r.target = dst;
    r.route = {self_};
    seen_rreq_.insert({self_, r.request_id});
    broadcast(make_ctl(net_, self_, kBroadcast, r));
    double timeout = cfg_.rreq_timeout * static_cast<double>(1u << d.attempt);
    d.timer = net_.engine().schedule(now() + timeout, EventKind::Timer, self_,
                                     [this, dst] { discovery_timeout(dst); });
}

void DsrAgent::discovery_timeout(NodeId dst) {
    if (!best_route(dst).empty()) {
        discoveries_.erase(dst);
        flush_buffer(dst);
        return;
    }
    auto it = discoveries_.find(dst);
    if (it == discoveries_.end()) return;
    if (++it->second.attempt > cfg_.max_retries) {
        // Every packet gets the full retry schedule: drop what was buffered
        // for this whole failed session, keep packets that arrived midway
        // and give them a fresh session of their own.
        double session_start = it->second.session_start;
        discoveries_.erase(it);
        auto bit = buffer_.find(dst);
        if (bit != buffer_.end()) {
            auto& q = bit->second;
            for (auto qit = q.begin(); qit != q.end();) {
                if (qit->buffered_at <= session_start) {
                    net_.packet_lost(self_, qit->pkt, DropReason::NoRoute);
                    qit = q.erase(qit);
                } else {
                    ++qit;
                }
            }
            if (q.empty()) {
                buffer_.erase(bit);
            } else {
                start_discovery(dst);
            }
        }
        return;
    }
    start_discovery(dst);
}

void DsrAgent::flush_buffer(NodeId dst) {
    if (draining_.count(dst)) return;
    flush_step(dst);
}

// One buffered packet per step; see the AODV agent for the rationale.
void DsrAgent::flush_step(NodeId dst) {
    draining_.erase(dst);
    auto it = buffer_.find(dst);
    if (it == buffer_.end()) return;
    if (it->second.empty()) {
        if (!discoveries_.count(dst)) buffer_.erase(it);
        return;
    }
    auto route = best_route(dst);
    if (route.empty()) {
        if (!discoveries_.count(dst)) start_discovery(dst);
        return;
    }
    Packet pkt = std::move(it->second.front().pkt);
    it->second.pop_front();
    send_data(std::move(pkt), route);
    if (it->second.empty()) {
        if (!discoveries_.count(dst)) buffer_.erase(it);
        return;
    }
    draining_.insert(dst);
    net_.engine().schedule(now() + cfg_.flush_spacing, EventKind::Timer, self_,
                           [this, dst] { flush_step(dst); });
}

void DsrAgent::handle(Packet pkt, NodeId from) {
    if (std::holds_alternative<CbrData>(pkt.body)) {
        handle_data(std::move(pkt), from);
    } else if (const auto* rreq = std::get_if<DsrRreq>(&pkt.body)) {
        handle_rreq(*rreq, from);
    } else if (auto* rrep = std::get_if<DsrRrep>(&pkt.body)) {
        handle_rrep(std::move(*rrep), from);
    } else if (auto* rerr = std::get_if<DsrRerr>(&pkt.body)) {
        handle_rerr(std::move(*rerr), from);
    }
}

void DsrAgent::handle_data(Packet pkt, NodeId from) {
    (void)from;
    auto& d = std::get<CbrData>(pkt.body);
    const auto& sr = d.source_route;
    if (d.cursor >= sr.size() || sr[d.cursor] != self_) {
        net_.packet_lost(self_, pkt, DropReason::Corrupt);
        return;
    }
    // The header carries a complete working path: cache the walked prefix
    // (reversed, towards the origin) and the remaining suffix (towards the
    // destination). Free cache warming from every forwarded data packet.
    if (d.cursor > 0) {
        std::vector<NodeId> back(sr.rend() - d.cursor - 1, sr.rend());
        insert_route(std::move(back));
    }
    if (d.cursor == sr.size() - 1) {
        deliver_local(pkt);
        return;
    }
    insert_route({sr.begin() + d.cursor, sr.end()});
    net_.recorder().fwd(now(), self_, pkt);
    d.cursor += 1;
    NodeId next = sr[d.cursor];
    unicast(std::move(pkt), next);
}

void DsrAgent::handle_rreq(const DsrRreq& r, NodeId from) {
    (void)from;
    if (r.origin == self_) return;
    if (!seen_rreq_.insert({r.origin, r.request_id}).second) return;
    if (std::find(r.route.begin(), r.route.end(), self_) != r.route.end()) {
        return; // already on the accumulated path
    }

    // the accumulated path, reversed, is a usable route back to the origin
    {
        std::vector<NodeId> back{self_};
        back.insert(back.end(), r.route.rbegin(), r.route.rend());
        insert_route(std::move(back));
    }

    if (r.target == self_) {
        DsrRrep rep;
        rep.route = r.route;
        rep.route.push_back(self_);
        rep.rev_cursor = rep.route.size() - 2;
        NodeId next = rep.route[rep.rev_cursor];
        unicast(make_ctl(net_, self_, r.origin, rep), next);
        return;
    }

    auto cached = best_route(r.target);
    if (!cached.empty()) {
        std::vector<NodeId> full = r.route;
        full.insert(full.end(), cached.begin(), cached.end());
        if (!has_duplicate(full)) {
            DsrRrep rep;
            rep.route = std::move(full);
            rep.rev_cursor = r.route.size() - 1; // hand straight to upstream
            NodeId next = rep.route[rep.rev_cursor];
            // self sits between route prefix and cached tail; rev_cursor is
            // already the upstream node because self answers, not forwards
            unicast(make_ctl(net_, self_, r.origin, rep), next);
            return;
        }
        // concatenation would loop: fall through and keep flooding
    }

    DsrRreq fwd = r;
    fwd.route.push_back(self_);
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

void DsrAgent::handle_rrep(DsrRrep r, NodeId from) {
    (void)from;
    if (r.rev_cursor >= r.route.size() || r.route[r.rev_cursor] != self_) {
        return;
    }
    // learn both directions of the discovered path
    insert_route(std::vector<NodeId>(r.route.begin() + r.rev_cursor, r.route.end()));
    if (r.rev_cursor > 0) {
        std::vector<NodeId> back(r.route.rend() - r.rev_cursor - 1, r.route.rend());
        insert_route(std::move(back));
    }

    if (r.rev_cursor == 0) { // reached the origin
        NodeId target = r.route.back();
        // The replied route may have been refused by the cache (it crosses a
        // recently failed link). Only a reply that produced a usable route
        // ends the discovery; otherwise the pending session keeps its
        // exponential backoff instead of immediately re-flooding.
        if (best_route(target).empty()) return;
        if (auto it = discoveries_.find(target); it != discoveries_.end()) {
            net_.engine().cancel(it->second.timer);
            discoveries_.erase(it);
        }
        flush_buffer(target);
        return;
    }
    r.rev_cursor -= 1;
    NodeId next = r.route[r.rev_cursor];
    NodeId origin = r.route.front();
    unicast(make_ctl(net_, self_, origin, std::move(r)), next);
}

void DsrAgent::reoriginate(Packet pkt) {
    auto& d = std::get<CbrData>(pkt.body);
    d.salvage_count += 1;
    if (d.salvage_count > cfg_.salvage_limit) {
        net_.packet_lost(self_, pkt, DropReason::Retry);
        return;
    }
    d.source_route.clear();
    d.cursor = 0;
    pkt.size_bytes = packet_wire_size(pkt.body);
    originate(std::move(pkt));
}

void DsrAgent::on_link_failure(NodeId next_hop, Packet pkt) {
    prune_link(self_, next_hop);

    if (auto* d = std::get_if<CbrData>(&pkt.body)) {
        const auto& sr = d->source_route;
        if (pkt.src == self_ || sr.size() < 2) {
            reoriginate(std::move(pkt));
            return;
        }
        // self is the hop before the cursor position that failed
        std::size_t idx = d->cursor == 0 ? 0 : d->cursor - 1;
        if (idx >= sr.size() || sr[idx] != self_) {
            net_.packet_lost(self_, pkt, DropReason::Corrupt);
            return;
        }
        DsrRerr err;
        err.broken_from = self_;
        err.broken_to = next_hop;
        err.back_route.assign(sr.rend() - idx - 1, sr.rend()); // self..origin
        err.cursor = 1;
        DsrEmbeddedData emb;
        emb.uid = pkt.uid;
        emb.src = pkt.src;
        emb.dst = pkt.dst;
        emb.origin_time = pkt.origin_time;
        emb.hops = pkt.hops;
        emb.payload_bytes = d->payload_bytes;
        emb.salvage_count = d->salvage_count;
        err.data = emb;
        if (err.back_route.size() < 2) {
            net_.packet_lost(self_, pkt, DropReason::Retry);
            return;
        }
        NodeId next = err.back_route[1];
        unicast(make_ctl(net_, self_, pkt.src, std::move(err)), next);
        return;
    }
    if (std::holds_alternative<DsrRerr>(pkt.body)) {
        // the error itself could not travel back: its cargo is lost
        net_.packet_lost(self_, pkt, DropReason::Retry);
        return;
    }
    // an undeliverable RREP: the origin's discovery timer handles it
}

void DsrAgent::handle_rerr(DsrRerr r, NodeId from) {
    (void)from;
    prune_link(r.broken_from, r.broken_to);
    if (r.cursor >= r.back_route.size() || r.back_route[r.cursor] != self_) {
        return;
    }
    if (r.cursor == r.back_route.size() - 1) { // self is the origin
        if (r.data) {
            Packet pkt;
            pkt.uid = r.data->uid;
            pkt.type = PacketType::Cbr;
            pkt.src = r.data->src;
            pkt.dst = r.data->dst;
            pkt.origin_time = r.data->origin_time;
            pkt.hops = r.data->hops;
            pkt.size_bytes = r.data->payload_bytes;
            pkt.body = CbrData{r.data->payload_bytes, {}, 0, r.data->salvage_count};
            reoriginate(std::move(pkt));
        }
        return;
    }
    r.cursor += 1;
    NodeId next = r.back_route[r.cursor];
    NodeId origin = r.back_route.back();
    unicast(make_ctl(net_, self_, origin, std::move(r)), next);
}

std::uint64_t DsrAgent::buffered_cbr() const {
    std::uint64_t n = 0;
    for (const auto& [dst, q] : buffer_) {
        for (const auto& b : q) {
            if (b.pkt.type == PacketType::Cbr) ++n;
        }
    }
    return n;
}

} // namespace manet
