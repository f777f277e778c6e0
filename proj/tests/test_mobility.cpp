#include "manet/mobility.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>

using namespace manet;

namespace {

bool on_street(const GridSpec& g, const Vec2& p, double tol = 1e-6) {
    for (int i = 0; i < g.vertical_streets; ++i) {
        if (std::abs(p.x - g.street_x(i)) <= tol) return true;
    }
    for (int j = 0; j < g.horizontal_streets; ++j) {
        if (std::abs(p.y - g.street_y(j)) <= tol) return true;
    }
    return false;
}

MobilityScenario sample_scenario(double max_pause, std::uint64_t seed = 11) {
    GridSpec grid;
    MobilityParams p;
    p.n_nodes = 20;
    p.max_pause = max_pause;
    RngStream rng(seed, "mobility");
    return generate_manhattan(grid, p, 100.0, rng);
}

} // namespace

TEST_CASE("generated waypoints stay on streets, in bounds, at legal speeds") {
    MobilityScenario s = sample_scenario(40.0);
    REQUIRE(s.traces.size() == 20);
    for (const auto& tr : s.traces) {
        REQUIRE(!tr.empty());
        CHECK(tr.front().at == doctest::Approx(0.0));
        for (std::size_t k = 0; k < tr.size(); ++k) {
            const Waypoint& w = tr[k];
            CHECK(on_street(s.grid, w.pos));
            CHECK(w.pos.x >= -1e-9);
            CHECK(w.pos.x <= s.grid.width + 1e-9);
            CHECK(w.pos.y >= -1e-9);
            CHECK(w.pos.y <= s.grid.height + 1e-9);
            if (k + 1 < tr.size()) {
                const Waypoint& n = tr[k + 1];
                CHECK(n.at > w.at);
                double d = distance(w.pos, n.pos);
                if (w.speed_to_next > 0.0) {
                    // realized speed equals the drawn per-segment speed
                    double v = d / (n.at - w.at);
                    CHECK(v == doctest::Approx(w.speed_to_next).epsilon(1e-9));
                    CHECK(v >= 5.0 - 1e-9);
                    CHECK(v <= 20.0 + 1e-9);
                } else {
                    CHECK(d == doctest::Approx(0.0)); // pause: no displacement
                }
            }
        }
        CHECK(tr.back().at >= 100.0);
    }
}

TEST_CASE("zero max pause produces no pause segments") {
    MobilityScenario s = sample_scenario(0.0);
    for (const auto& tr : s.traces) {
        for (std::size_t k = 0; k + 1 < tr.size(); ++k) {
            CHECK(tr[k].speed_to_next > 0.0);
        }
    }
}

TEST_CASE("generation is deterministic in the seed") {
    std::string a = export_ns2(sample_scenario(20.0, 5));
    std::string b = export_ns2(sample_scenario(20.0, 5));
    std::string c = export_ns2(sample_scenario(20.0, 6));
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("position interpolates linearly between waypoints") {
    MobilityScenario s;
    s.duration = 20.0;
    s.traces.push_back(
        {Waypoint{0.0, {0.0, 0.0}, 5.0}, Waypoint{20.0, {100.0, 0.0}, 0.0}});
    Vec2 p = position_at(s, 0, 10.0);
    CHECK(p.x == doctest::Approx(50.0));
    CHECK(p.y == doctest::Approx(0.0));
    CHECK(position_at(s, 0, 0.0).x == doctest::Approx(0.0));
    CHECK(position_at(s, 0, 20.0).x == doctest::Approx(100.0));
    CHECK_THROWS_AS(position_at(s, 0, 25.0), std::out_of_range);
    CHECK_THROWS_AS(position_at(s, 1, 1.0), std::out_of_range);
}

TEST_CASE("export produces the movement-script statement set") {
    MobilityScenario s;
    s.duration = 18.0;
    s.traces.push_back({Waypoint{0.0, {150.0, 200.0}, 0.0},
                        Waypoint{10.0, {150.0, 200.0}, 12.5},
                        Waypoint{18.0, {250.0, 200.0}, 0.0}});
    std::string text = export_ns2(s);
    CHECK(text == "$node_(0) set X_ 150.000000\n"
                  "$node_(0) set Y_ 200.000000\n"
                  "$node_(0) set Z_ 0.000000\n"
                  "$ns_ at 10.000000000 "
                  "\"$node_(0) setdest 250.000000 200.000000 12.500000\"\n");
}

TEST_CASE("import reconstructs the trace with hand-checked arrival time") {
    std::string text = "$node_(0) set X_ 150.000000\n"
                       "$node_(0) set Y_ 200.000000\n"
                       "$node_(0) set Z_ 0.000000\n"
                       "$ns_ at 10.000000000 "
                       "\"$node_(0) setdest 250.000000 200.000000 12.500000\"\n";
    MobilityScenario s = import_ns2(text);
    REQUIRE(s.traces.size() == 1);
    // 100 m at 12.5 m/s: departs t=10, arrives t=18
    CHECK(s.duration == doctest::Approx(18.0));
    Vec2 before = position_at(s, 0, 5.0);
    CHECK(before.x == doctest::Approx(150.0));
    Vec2 mid = position_at(s, 0, 14.0);
    CHECK(mid.x == doctest::Approx(200.0));
    CHECK(mid.y == doctest::Approx(200.0));
    CHECK(position_at(s, 0, 18.0).x == doctest::Approx(250.0));
}

TEST_CASE("export/import round-trip preserves every sampled position") {
    MobilityScenario s = sample_scenario(40.0, 3);
    MobilityScenario r = import_ns2(export_ns2(s));
    REQUIRE(r.traces.size() == s.traces.size());
    RngStream rng(99, "sampling");
    for (int k = 0; k < 1000; ++k) {
        NodeId node = rng.uniform_int(static_cast<std::uint32_t>(s.traces.size()));
        double t = rng.uniform(0.0, s.duration);
        Vec2 a = position_at(s, node, t);
        Vec2 b = position_at(r, node, t);
        CHECK(distance(a, b) <= 1e-6);
    }
}

TEST_CASE("malformed movement scripts are rejected with the line number") {
    CHECK_THROWS_WITH_AS(import_ns2("$node_(0) set X_ 1.0\nbogus line\n"),
                         doctest::Contains("line 2"), std::runtime_error);
    // zero speed toward a distinct target is impossible to schedule
    std::string zero_speed = "$node_(0) set X_ 0.0\n"
                             "$node_(0) set Y_ 0.0\n"
                             "$ns_ at 1.000000000 "
                             "\"$node_(0) setdest 10.000000 0.000000 0.000000\"\n";
    CHECK_THROWS_AS(import_ns2(zero_speed), std::runtime_error);
    // missing initial position
    CHECK_THROWS_AS(import_ns2("$ns_ at 1.000000000 "
                               "\"$node_(0) setdest 1.000000 0.000000 5.000000\"\n"),
                    std::runtime_error);
}

TEST_CASE("generator rejects inconsistent parameters") {
    GridSpec grid;
    MobilityParams p;
    RngStream rng(1, "mobility");
    p.v_min = 25.0; // > v_max
    CHECK_THROWS_AS(generate_manhattan(grid, p, 100.0, rng),
                    std::invalid_argument);
    p = MobilityParams{};
    GridSpec tiny;
    tiny.vertical_streets = 1;
    CHECK_THROWS_AS(generate_manhattan(tiny, p, 100.0, rng),
                    std::invalid_argument);
}
