#include "manet/dsdv.hpp"

#include <algorithm>

namespace manet {

namespace {

Packet make_update(Network& net, NodeId self, DsdvUpdate u) {
    Packet p;
    p.uid = net.next_uid();
    p.type = PacketType::DsdvCtl;
    p.src = self;
    p.dst = kBroadcast;
    p.origin_time = net.engine().now();
    p.size_bytes = packet_wire_size(u);
    p.body = std::move(u);
    return p;
}

} // namespace

DsdvAgent::DsdvAgent(Network& net, NodeId self, const DsdvConfig& cfg)
    : RoutingAgent(net, self), cfg_(cfg) {}

void DsdvAgent::start() {
    double t = net_.rng("protocol").uniform(0.0, cfg_.jitter);
    net_.engine().schedule(t, EventKind::Timer, self_,
                           [this] { periodic_update(); });
}

void DsdvAgent::periodic_update() {
    own_seq_ += 2;
    bool full = intervals_ % cfg_.full_dump_every == 0;
    ++intervals_;
    broadcast_update(full);
    double base = static_cast<double>(intervals_) * cfg_.update_interval;
    double t = base + net_.rng("protocol").uniform(0.0, cfg_.jitter);
    net_.engine().schedule(std::max(t, now()), EventKind::Timer, self_,
                           [this] { periodic_update(); });
}

void DsdvAgent::broadcast_update(bool full_dump) {
    DsdvUpdate u;
    u.origin = self_;
    u.full_dump = full_dump;
    u.entries.push_back({self_, 0, own_seq_});
    for (auto& [dest, e] : table_) {
        bool settled = e.settling_until <= now();
        if (settled) {
            bool include = full_dump || e.changed;
            if (include) {
                u.entries.push_back({dest, e.metric, e.seq});
                e.adv_metric = e.metric;
                e.adv_seq = e.seq;
                e.advertised_once = true;
                e.changed = false;
            }
        } else if (full_dump && e.advertised_once) {
            // still settling: repeat the last advertised state
            u.entries.push_back({dest, e.adv_metric, e.adv_seq});
        }
    }
    last_broadcast_ = now();
    broadcast(make_update(net_, self_, std::move(u)));
}

void DsdvAgent::schedule_triggered() {
    if (trigger_pending_) return;
    trigger_pending_ = true;
    double t = std::max(now(), last_broadcast_ + cfg_.triggered_min_gap);
    net_.engine().schedule(t, EventKind::Timer, self_, [this] {
        trigger_pending_ = false;
        broadcast_update(false);
    });
}

void DsdvAgent::set_entry_seq(Entry& e, std::uint32_t seq) {
    if (seq < e.seq) {
        net_.recorder().count_violation();
        return;
    }
    e.seq = seq;
}

DsdvAgent::Entry* DsdvAgent::usable_route(NodeId dest) {
    auto it = table_.find(dest);
    if (it == table_.end()) return nullptr;
    Entry& e = it->second;
    if (e.metric == kInfMetric || e.seq % 2 != 0) return nullptr;
    return &e;
}

const DsdvAgent::Entry* DsdvAgent::entry(NodeId dest) const {
    auto it = table_.find(dest);
    return it == table_.end() ? nullptr : &it->second;
}

void DsdvAgent::originate(Packet pkt) {
    if (pkt.dst == self_) {
        deliver_local(pkt);
        return;
    }
    forward_data(std::move(pkt));
}

void DsdvAgent::forward_data(Packet pkt) {
    Entry* e = usable_route(pkt.dst);
    if (!e) {
        // proactive protocol: no buffering, the packet dies here
        net_.packet_lost(self_, pkt, DropReason::NoRoute);
        return;
    }
    unicast(std::move(pkt), e->next_hop);
}

void DsdvAgent::handle(Packet pkt, NodeId from) {
    if (std::holds_alternative<CbrData>(pkt.body)) {
        if (pkt.dst == self_) {
            deliver_local(pkt);
            return;
        }
        net_.recorder().fwd(now(), self_, pkt);
        forward_data(std::move(pkt));
        return;
    }
    if (const auto* u = std::get_if<DsdvUpdate>(&pkt.body)) {
        handle_update(*u, from);
    }
}

void DsdvAgent::handle_update(const DsdvUpdate& u, NodeId from) {
    bool topology_changed = false;
    for (const auto& adv : u.entries) {
        if (adv.dest == self_) {
            // someone believes our route is broken: answer with a fresher seq
            if (adv.seq % 2 != 0 && adv.seq >= own_seq_) {
                own_seq_ = adv.seq + 1;
                topology_changed = true;
            }
            continue;
        }
        bool broken = adv.seq % 2 != 0 || adv.metric == kInfMetric;
        std::uint32_t cand = broken ? kInfMetric : adv.metric + 1;

        auto it = table_.find(adv.dest);
        if (it == table_.end()) {
            if (broken) continue; // nothing to invalidate
            Entry e;
            e.next_hop = from;
            e.metric = cand;
            e.seq = adv.seq;
            e.installed_at = now();
            e.settling_until = now();
            e.changed = true;
            table_.emplace(adv.dest, e);
            topology_changed = true;
            continue;
        }
        Entry& e = it->second;
        if (adv.seq > e.seq) {
            bool metric_changed = cand != e.metric;
            e.next_hop = broken ? e.next_hop : from;
            e.metric = cand;
            set_entry_seq(e, adv.seq);
            e.installed_at = now();
            e.settling_until = now(); // fresh seq: advertise right away
            e.changed = true;
            if (metric_changed) topology_changed = true;
        } else if (adv.seq == e.seq && cand < e.metric) {
            // equal freshness, better path: use it now, advertise after settling
            e.next_hop = from;
            e.metric = cand;
            e.installed_at = now();
            e.settling_until = now() + cfg_.settling_time;
            e.changed = true;
        }
    }
    if (topology_changed) schedule_triggered();
}

void DsdvAgent::on_link_failure(NodeId next_hop, Packet pkt) {
    bool any = false;
    for (auto& [dest, e] : table_) {
        if (e.next_hop != next_hop || e.metric == kInfMetric) continue;
        e.metric = kInfMetric;
        set_entry_seq(e, e.seq + 1); // odd: broken
        e.settling_until = now();
        e.changed = true;
        any = true;
    }
    if (any) schedule_triggered();
    if (pkt.type == PacketType::Cbr) {
        net_.packet_lost(self_, pkt, DropReason::Retry);
    }
}

std::map<NodeId, NodeId> DsdvAgent::next_hop_snapshot() const {
    std::map<NodeId, NodeId> out;
    for (const auto& [dest, e] : table_) {
        if (e.metric != kInfMetric && e.seq % 2 == 0) out[dest] = e.next_hop;
    }
    return out;
}

} // namespace manet
