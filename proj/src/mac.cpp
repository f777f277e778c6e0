#include "manet/mac.hpp"

#include <algorithm>

namespace manet {

std::vector<NodeId> neighbors(const std::map<NodeId, Vec2>& positions,
                              NodeId node, double range) {
    auto it = positions.find(node);
    if (it == positions.end()) {
        throw std::out_of_range("neighbors: node not in position map");
    }
    std::vector<NodeId> out;
    for (const auto& [id, pos] : positions) {
        if (id == node) continue;
        if (distance(it->second, pos) <= range) out.push_back(id);
    }
    return out;
}

std::uint64_t Medium::add(NodeId sender, Vec2 pos, double start, double end) {
    // prune long-finished transmissions
    std::erase_if(txs_, [&](const Transmission& t) { return t.end < start - 0.1; });
    std::uint64_t id = next_id_++;
    total_airtime_ += end - start;
    txs_.push_back(Transmission{id, sender, pos, start, end});
    return id;
}

std::optional<double> Medium::busy_until(const Vec2& pos, double now,
                                         double range) const {
    std::optional<double> until;
    for (const auto& t : txs_) {
        if (t.start < now && now < t.end && distance(t.pos, pos) <= range) {
            if (!until || t.end > *until) until = t.end;
        }
    }
    return until;
}

bool Medium::lost_at(std::uint64_t tx_id, NodeId receiver,
                     const Vec2& receiver_pos, double range) const {
    const Transmission* self = nullptr;
    for (const auto& t : txs_) {
        if (t.id == tx_id) { self = &t; break; }
    }
    if (!self) return true; // pruned mid-flight: cannot happen in practice
    for (const auto& t : txs_) {
        if (t.id == tx_id) continue;
        bool overlap = t.start < self->end && t.end > self->start;
        if (!overlap) continue;
        if (t.sender == receiver) return true; // half-duplex
        if (distance(t.pos, receiver_pos) <= range) return true;
    }
    return false;
}

Mac::Mac(Network& net, Medium& medium, NodeId self, const MacConfig& cfg)
    : net_(net), medium_(medium), self_(self), cfg_(cfg), cw_(cfg.cw_min) {}

double Mac::frame_airtime(const Frame& f) const {
    return static_cast<double>(f.pkt.size_bytes + cfg_.header_overhead) * 8.0 /
           cfg_.bitrate;
}

void Mac::send(Packet pkt, NodeId next_hop) {
    if (queue_.size() >= cfg_.ifq_len) {
        net_.packet_lost(self_, pkt, DropReason::Ifq);
        return;
    }
    Frame frame{std::move(pkt), next_hop, 0};
    if (cfg_.control_priority && frame.pkt.type != PacketType::Cbr) {
        // Insert ahead of the first queued data frame, but never ahead of a
        // head frame already in its sense/backoff/transmit cycle.
        auto it = queue_.begin() + (busy_ && !queue_.empty() ? 1 : 0);
        while (it != queue_.end() && it->pkt.type != PacketType::Cbr) ++it;
        queue_.insert(it, std::move(frame));
    } else {
        queue_.push_back(std::move(frame));
    }
    maybe_start();
}

std::uint64_t Mac::cbr_held() const {
    std::uint64_t n = 0;
    for (const auto& f : queue_) {
        if (f.pkt.type == PacketType::Cbr) ++n;
        if (const auto* e = std::get_if<DsrRerr>(&f.pkt.body); e && e->data) ++n;
    }
    return n;
}

void Mac::maybe_start() {
    if (busy_ || queue_.empty()) return;
    busy_ = true;
    cw_ = cfg_.cw_min;
    attempt();
}

void Mac::attempt() {
    Engine& eng = net_.engine();
    double now = eng.now();
    Vec2 pos = net_.position_of(self_, now);
    if (auto until = medium_.busy_until(pos, now, cfg_.cs_range)) {
        eng.schedule(*until, EventKind::Timer, self_, [this] { attempt(); });
        return;
    }
    std::uint32_t slots =
        cfg_.zero_backoff ? 0 : net_.rng("mac").uniform_int(cw_);
    double delay = cfg_.difs + slots * cfg_.slot;
    eng.schedule(now + delay, EventKind::Timer, self_, [this] { begin_tx(); });
}

void Mac::begin_tx() {
    Engine& eng = net_.engine();
    double now = eng.now();
    Vec2 pos = net_.position_of(self_, now);
    if (auto until = medium_.busy_until(pos, now, cfg_.cs_range)) {
        // channel got taken during our backoff: redraw once it frees up
        eng.schedule(*until, EventKind::Timer, self_, [this] { attempt(); });
        return;
    }
    double end = now + frame_airtime(queue_.front());
    std::uint64_t tx_id = medium_.add(self_, pos, now, end);
    eng.schedule(end, EventKind::DeliverFrame, self_,
                 [this, tx_id, now] { end_tx(tx_id, now); });
}

void Mac::end_tx(std::uint64_t tx_id, double tx_start) {
    Frame& f = queue_.front();
    Vec2 tx_pos = net_.position_of(self_, tx_start);

    auto receives = [&](NodeId r) {
        Vec2 rp = net_.position_of(r, tx_start);
        if (distance(tx_pos, rp) > cfg_.range) return false;
        if (cfg_.ignore_collisions) return true;
        return !medium_.lost_at(tx_id, r, rp, cfg_.range);
    };

    if (f.next_hop == kBroadcast) {
        Frame done = std::move(f);
        queue_.pop_front();
        busy_ = false;
        for (NodeId r = 0; r < net_.node_count(); ++r) {
            if (r == self_) continue;
            if (receives(r)) net_.deliver(r, done.pkt, self_);
        }
        maybe_start();
        return;
    }

    if (receives(f.next_hop)) {
        Frame done = std::move(f);
        queue_.pop_front();
        busy_ = false;
        net_.deliver(done.next_hop, done.pkt, self_);
        maybe_start();
        return;
    }

    // no ack: retry with doubled contention window, then report the break
    if (f.retries >= cfg_.retry_limit) {
        Frame failed = std::move(f);
        queue_.pop_front();
        busy_ = false;
        // Fail fast: frames queued behind it for the same dead neighbor
        // would each burn a full retry cycle; hand them back too.
        std::deque<Frame> also;
        for (auto it = queue_.begin(); it != queue_.end();) {
            if (it->next_hop == failed.next_hop) {
                also.push_back(std::move(*it));
                it = queue_.erase(it);
            } else {
                ++it;
            }
        }
        net_.link_failed(self_, failed.next_hop, failed.pkt);
        for (auto& a : also) net_.link_failed(self_, a.next_hop, a.pkt);
        maybe_start();
        return;
    }
    ++f.retries;
    cw_ = std::min(cw_ * 2, cfg_.cw_max);
    attempt();
}

} // namespace manet
