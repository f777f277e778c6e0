#include "manet/engine.hpp"

#include <sstream>
#include <stdexcept>

namespace manet {

const char* to_string(EventKind k) {
    switch (k) {
    case EventKind::DeliverFrame: return "deliver-frame";
    case EventKind::Timer: return "timer";
    case EventKind::Waypoint: return "waypoint";
    case EventKind::TrafficEmit: return "traffic-emit";
    }
    return "?";
}

EventId Engine::schedule(double fire_at, EventKind kind, NodeId target,
                         std::function<void()> fn) {
    if (fire_at < clock_) {
        std::ostringstream os;
        os << "schedule: fire_at " << fire_at << " is in the past (clock "
           << clock_ << ")";
        throw std::invalid_argument(os.str());
    }
    EventId id = next_seq_++;
    queue_.push(Item{fire_at, id, kind, target, std::move(fn)});
    pending_.insert(id);
    return id;
}

bool Engine::cancel(EventId id) {
    if (pending_.erase(id) == 0) return false;
    cancelled_.insert(id);
    return true;
}

std::size_t Engine::run(double until) {
    std::size_t processed = 0;
    while (!queue_.empty() && queue_.top().fire_at <= until) {
        Item item = queue_.top();
        queue_.pop();
        if (cancelled_.erase(item.seq)) continue;
        pending_.erase(item.seq);
        clock_ = item.fire_at;
        try {
            item.fn();
        } catch (const std::exception& e) {
            std::ostringstream os;
            os << "event #" << item.seq << " (" << to_string(item.kind)
               << ", t=" << item.fire_at << ", target=" << item.target
               << ") failed: " << e.what();
            throw std::runtime_error(os.str());
        }
        ++processed;
    }
    if (until > clock_) clock_ = until;
    return processed;
}

RngStream& Engine::substream(const std::string& label) {
    auto it = streams_.find(label);
    if (it == streams_.end()) {
        it = streams_.emplace(label, RngStream(master_seed_, label)).first;
    }
    return it->second;
}

} // namespace manet
