#ifndef MANET_ENGINE_HPP
#define MANET_ENGINE_HPP

#include "manet/rng.hpp"
#include "manet/types.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

namespace manet {

using EventId = std::uint64_t;

enum class EventKind { DeliverFrame, Timer, Waypoint, TrafficEmit };

const char* to_string(EventKind k);

/**
 * Deterministic discrete-event engine.
 *
 * Events are dispatched in non-decreasing (fire_at, sequence) order; the
 * sequence number is assigned at scheduling time, so simultaneous events run
 * in insertion order. One engine instance drives one simulation run and is
 * not shared across threads. Named RNG substreams derived from the master
 * seed live here so every module draws from a reproducible source.
 */
class Engine {
public:
    explicit Engine(std::uint64_t master_seed, double horizon = 0.0)
        : master_seed_(master_seed), horizon_(horizon) {}

    double now() const { return clock_; }
    std::uint64_t master_seed() const { return master_seed_; }

    /// Schedule a handler. Throws std::invalid_argument if fire_at < now().
    EventId schedule(double fire_at, EventKind kind, NodeId target,
                     std::function<void()> fn);

    /// True iff the event was pending and will now never fire.
    bool cancel(EventId id);

    /// Dispatch everything with fire_at <= until; clock ends at until.
    /// Returns the number of events processed.
    std::size_t run(double until);

    /// Lazily created stream for (master seed, label).
    RngStream& substream(const std::string& label);

    std::size_t pending_count() const { return pending_.size(); }

private:
    struct Item {
        double fire_at;
        EventId seq;
        EventKind kind;
        NodeId target;
        std::function<void()> fn;
    };
    struct Later {
        bool operator()(const Item& a, const Item& b) const {
            if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
            return a.seq > b.seq;
        }
    };

    std::uint64_t master_seed_;
    double horizon_;
    double clock_ = 0.0;
    EventId next_seq_ = 0;
    std::priority_queue<Item, std::vector<Item>, Later> queue_;
    std::set<EventId> pending_;
    std::set<EventId> cancelled_; // dead entries still in queue_
    std::map<std::string, RngStream> streams_;
};

} // namespace manet

#endif // MANET_ENGINE_HPP
