#include "helpers.hpp"

#include "manet/simulation.hpp"

#include <doctest.h>

#include <stdexcept>

using namespace manet;
using namespace manet::test;

TEST_CASE("a single-hop flow delivers everything with hand-checked metrics") {
    ScenarioConfig cfg;
    cfg.protocol = Protocol::Aodv;
    cfg.n_nodes = 2;
    cfg.max_conn = 0;
    cfg.duration = 100.0;
    Simulation sim(cfg, static_scenario({{0, 0}, {100, 0}}, cfg.duration),
                   {Flow{0, 1, 0.0, 4.0, 512}});
    RunMetrics m = sim.run();
    CHECK(m.sent == 400);
    CHECK(m.received == 400);
    CHECK(m.pdf == doctest::Approx(1.0));
    CHECK(m.throughput_kbps == doctest::Approx(16.384));
    REQUIRE(m.avg_delay.has_value());
    CHECK(*m.avg_delay >= 2.28e-3); // at least one frame airtime
    CHECK(*m.avg_delay < 0.05);
    CHECK(m.invariant_violations == 0);
}

TEST_CASE("a run cannot be repeated on the same instance") {
    ScenarioConfig cfg;
    cfg.n_nodes = 2;
    cfg.max_conn = 0;
    cfg.duration = 1.0;
    Simulation sim(cfg, static_scenario({{0, 0}, {100, 0}}, cfg.duration), {});
    sim.run();
    CHECK_THROWS_AS(sim.run(), std::logic_error);
}

TEST_CASE("an injected scenario must cover every node") {
    ScenarioConfig cfg;
    cfg.n_nodes = 3;
    cfg.max_conn = 0;
    CHECK_THROWS_AS(
        Simulation(cfg, static_scenario({{0, 0}, {100, 0}}, cfg.duration), {}),
        std::invalid_argument);
}

TEST_CASE("identical configurations give byte-identical traces") {
    ScenarioConfig cfg;
    cfg.protocol = Protocol::Dsr;
    cfg.n_nodes = 10;
    cfg.max_conn = 8;
    cfg.duration = 30.0;
    cfg.seed = 7;
    Simulation a(cfg), b(cfg);
    RunMetrics ma = a.run();
    RunMetrics mb = b.run();
    CHECK(a.recorder().serialize() == b.recorder().serialize());
    CHECK(ma.pdf == doctest::Approx(mb.pdf));
    CHECK(ma.sent == mb.sent);
    CHECK(ma.control_packets == mb.control_packets);

    ScenarioConfig other = cfg;
    other.seed = 8;
    Simulation c(other);
    c.run();
    CHECK(a.recorder().serialize() != c.recorder().serialize());
}

TEST_CASE("mobility and traffic depend only on the seed, not the protocol") {
    ScenarioConfig cfg;
    cfg.n_nodes = 10;
    cfg.max_conn = 8;
    cfg.duration = 20.0;
    cfg.seed = 3;
    cfg.protocol = Protocol::Aodv;
    Simulation a(cfg);
    cfg.protocol = Protocol::Dsdv;
    Simulation d(cfg);
    CHECK(export_ns2(a.scenario()) == export_ns2(d.scenario()));
    CHECK(flows_to_text(a.flows()) == flows_to_text(d.flows()));
}

TEST_CASE("a generated scenario runs clean under invariant validation") {
    ScenarioConfig cfg;
    cfg.protocol = Protocol::Aodv;
    cfg.n_nodes = 10;
    cfg.max_conn = 8;
    cfg.duration = 30.0;
    cfg.seed = 5;
    cfg.validate_invariants = true;
    Simulation sim(cfg);
    RunMetrics m = sim.run();
    CHECK(m.invariant_violations == 0);
    CHECK(m.sent > 0);
    // conservation: every originated packet is accounted for
    CHECK(m.sent == m.received + m.dropped + sim.inflight_cbr());
}
