#include "helpers.hpp"

#include "manet/dsr.hpp"
#include "manet/simulation.hpp"

#include <doctest.h>

using namespace manet;
using namespace manet::test;

namespace {

ScenarioConfig ideal_cfg(std::uint32_t n, double duration) {
    ScenarioConfig cfg;
    cfg.protocol = Protocol::Dsr;
    cfg.n_nodes = n;
    cfg.max_conn = 0;
    cfg.duration = duration;
    cfg.mac.zero_backoff = true;
    cfg.mac.ignore_collisions = true;
    cfg.dsr.fwd_jitter = 0.0;
    return cfg;
}

const std::vector<Vec2> kLine{{0, 0}, {200, 0}, {400, 0}};

Packet ctl(PacketBody body, NodeId src, NodeId dst) {
    Packet p;
    p.uid = 1000;
    p.type = PacketType::DsrCtl;
    p.src = src;
    p.dst = dst;
    p.size_bytes = packet_wire_size(body);
    p.body = std::move(body);
    return p;
}

Packet rrep_to_origin(std::vector<NodeId> route) {
    DsrRrep r;
    r.route = std::move(route);
    r.rev_cursor = 0;
    return ctl(r, r.route.size() > 1 ? 1 : 0, 0);
}

} // namespace

TEST_CASE("discovery over a two-hop line caches the full source route") {
    ScenarioConfig cfg = ideal_cfg(3, 2.0);
    Simulation sim(cfg, static_scenario(kLine, cfg.duration),
                   {Flow{0, 2, 0.5, 4.0, 512}});
    RunMetrics m = sim.run();
    CHECK(m.sent == 6);
    CHECK(m.received == 6);
    auto& a = dynamic_cast<DsrAgent&>(sim.agent(0));
    CHECK(a.best_route(2) == std::vector<NodeId>{0, 1, 2});
    CHECK(static_cast<int>(a.best_route(2).size()) - 1 ==
          bfs_hops(kLine, 250.0, 0, 2));
}

TEST_CASE("the cache prefers shorter routes, then fresher ones") {
    ScenarioConfig cfg = ideal_cfg(6, 2.0);
    Simulation sim(cfg,
                   static_scenario({{0, 0},
                                    {200, 0},
                                    {400, 0},
                                    {100, 100},
                                    {100, -100},
                                    {300, 0}},
                                   cfg.duration),
                   {});
    auto& a = dynamic_cast<DsrAgent&>(sim.agent(0));
    sim.agent(0).handle(rrep_to_origin({0, 4, 5, 2}), 4);
    CHECK(a.best_route(2) == std::vector<NodeId>{0, 4, 5, 2});
    sim.agent(0).handle(rrep_to_origin({0, 3, 2}), 3);
    CHECK(a.best_route(2) == std::vector<NodeId>{0, 3, 2});
    sim.agent(0).handle(rrep_to_origin({0, 1, 2}), 1);
    // equal length: the most recently learned route wins
    CHECK(a.best_route(2) == std::vector<NodeId>{0, 1, 2});
    CHECK(a.cache_size(2) == 3);
}

TEST_CASE("a request that already lists this node is discarded") {
    ScenarioConfig cfg = ideal_cfg(3, 2.0);
    Simulation sim(cfg, static_scenario(kLine, cfg.duration), {});
    DsrRreq r;
    r.request_id = 1;
    r.origin = 0;
    r.target = 2;
    r.route = {0, 1}; // node 1 is already on the accumulated path
    sim.agent(1).handle(ctl(r, 0, kBroadcast), 0);
    auto& b = dynamic_cast<DsrAgent&>(sim.agent(1));
    CHECK(b.cache_size(0) == 0);
    CHECK(sim.recorder().records().empty()); // no reply, no rebroadcast
}

TEST_CASE("a looping route offered to the cache counts as a violation") {
    ScenarioConfig cfg = ideal_cfg(4, 2.0);
    Simulation sim(cfg, static_scenario({{0, 0}, {200, 0}, {400, 0}, {100, 100}},
                                        cfg.duration),
                   {});
    DsrRrep r;
    r.route = {0, 3, 3, 2};
    r.rev_cursor = 0;
    sim.agent(0).handle(ctl(r, 0, 0), 3);
    auto& a = dynamic_cast<DsrAgent&>(sim.agent(0));
    CHECK(a.best_route(2).empty());
    CHECK(sim.recorder().finalize(1.0).invariant_violations == 1);
}

TEST_CASE("a route error prunes every cached route over the broken link") {
    ScenarioConfig cfg = ideal_cfg(5, 2.0);
    Simulation sim(
        cfg,
        static_scenario({{0, 0}, {200, 0}, {400, 0}, {100, 100}, {100, -100}},
                        cfg.duration),
        {});
    auto& a = dynamic_cast<DsrAgent&>(sim.agent(0));
    sim.agent(0).handle(rrep_to_origin({0, 1, 2}), 1);
    sim.agent(0).handle(rrep_to_origin({0, 3, 1, 2}), 3);
    sim.agent(0).handle(rrep_to_origin({0, 4, 2}), 4);
    CHECK(a.cache_size(2) == 3);

    DsrRerr err;
    err.broken_from = 1;
    err.broken_to = 2;
    err.back_route = {1, 0};
    err.cursor = 1;
    sim.agent(0).handle(ctl(err, 1, 0), 1);
    CHECK(a.cache_size(2) == 1); // both routes through link (1,2) are gone
    CHECK(a.best_route(2) == std::vector<NodeId>{0, 4, 2});

    // while the link is blacklisted the cache refuses to re-learn it
    sim.agent(0).handle(rrep_to_origin({0, 1, 2}), 1);
    CHECK(a.cache_size(2) == 1);
}

TEST_CASE("data with a mismatched source-route cursor is dropped as corrupt") {
    ScenarioConfig cfg = ideal_cfg(3, 2.0);
    Simulation sim(cfg, static_scenario(kLine, cfg.duration), {});
    Packet pkt = make_cbr(1, 0, 2, 0.0);
    auto& d = std::get<CbrData>(pkt.body);
    d.source_route = {0, 1, 2};
    d.cursor = 1; // names node 1, but node 2 received it
    sim.agent(2).handle(std::move(pkt), 0);
    const auto& recs = sim.recorder().records();
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].kind == RecKind::Drop);
    CHECK(recs[0].reason == DropReason::Corrupt);
}

TEST_CASE("a broken primary route is salvaged over a cached alternate") {
    // 0-1-2 is the shortest route; 0-3-2 survives after node 2 moves away
    // from node 1 (but stays within node 3's range).
    std::vector<Vec2> pos{{0, 0}, {100, 0}, {300, 0}, {150, 200}};
    ScenarioConfig cfg = ideal_cfg(4, 10.0);
    MobilityScenario s = static_scenario(pos, cfg.duration);
    s.traces[2] = {Waypoint{0.0, {300, 0}, 0.0},
                   Waypoint{1.0, {300, 0}, 100.0},
                   Waypoint{1.0 + distance({300, 0}, {240, 400}) / 100.0,
                            {240, 400},
                            0.0}};
    Simulation sim(cfg, std::move(s), {Flow{0, 2, 0.2, 4.0, 512}});
    RunMetrics m = sim.run();
    CHECK(m.pdf > 0.8);
    auto& a = dynamic_cast<DsrAgent&>(sim.agent(0));
    CHECK(a.best_route(2) == std::vector<NodeId>{0, 3, 2});
    CHECK(m.invariant_violations == 0);
}
