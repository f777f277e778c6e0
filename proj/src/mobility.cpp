#include "manet/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <stdexcept>

namespace manet {

namespace {

// Values that go onto the ns-2 wire are quantized to its 6-decimal
// precision at draw time, so export/import is position-preserving.
double quant6(double v) { return std::round(v * 1e6) / 1e6; }

struct Heading {
    int dx = 0; // -1, 0, 1 along street index axes
    int dy = 0;
};

Heading left_of(Heading h) { return {-h.dy, h.dx}; }
Heading right_of(Heading h) { return {h.dy, -h.dx}; }

bool heading_available(const GridSpec& g, int i, int j, Heading h) {
    int ni = i + h.dx;
    int nj = j + h.dy;
    return ni >= 0 && ni < g.vertical_streets && nj >= 0 &&
           nj < g.horizontal_streets;
}

class TraceBuilder {
public:
    void start(double t, Vec2 p) { wps_.push_back({t, p, 0.0}); }

    void move_to(Vec2 target, double speed) {
        Waypoint& cur = wps_.back();
        double d = distance(cur.pos, target);
        cur.speed_to_next = speed;
        wps_.push_back({cur.at + d / speed, target, 0.0});
    }

    void pause(double duration) {
        const Waypoint& cur = wps_.back();
        wps_.push_back({cur.at + duration, cur.pos, 0.0});
    }

    double now() const { return wps_.back().at; }
    std::vector<Waypoint> take() { return std::move(wps_); }

private:
    std::vector<Waypoint> wps_;
};

std::vector<Waypoint> generate_trace(const GridSpec& g,
                                     const MobilityParams& p, double duration,
                                     RngStream& rng) {
    // Initial placement: uniform over street lines.
    bool on_vertical = rng.uniform() < 0.5;
    int i, j;
    Vec2 pos;
    Heading heading;
    if (on_vertical) {
        i = static_cast<int>(rng.uniform_int(g.vertical_streets));
        double y = quant6(rng.uniform(0.0, g.height));
        pos = {g.street_x(i), y};
        heading = {0, rng.uniform() < 0.5 ? 1 : -1};
        // j = index of the intersection we are heading toward
        j = 0;
        if (heading.dy > 0) {
            while (j < g.horizontal_streets && g.street_y(j) <= y) ++j;
            if (j >= g.horizontal_streets) { heading.dy = -1; j = g.horizontal_streets - 1; while (g.street_y(j) >= y && j > 0) --j; }
        } else {
            j = g.horizontal_streets - 1;
            while (j >= 0 && g.street_y(j) >= y) --j;
            if (j < 0) { heading.dy = 1; j = 0; while (g.street_y(j) <= y && j < g.horizontal_streets - 1) ++j; }
        }
    } else {
        j = static_cast<int>(rng.uniform_int(g.horizontal_streets));
        double x = quant6(rng.uniform(0.0, g.width));
        pos = {x, g.street_y(j)};
        heading = {rng.uniform() < 0.5 ? 1 : -1, 0};
        if (heading.dx > 0) {
            i = 0;
            while (i < g.vertical_streets && g.street_x(i) <= x) ++i;
            if (i >= g.vertical_streets) { heading.dx = -1; i = g.vertical_streets - 1; while (g.street_x(i) >= x && i > 0) --i; }
        } else {
            i = g.vertical_streets - 1;
            while (i >= 0 && g.street_x(i) >= x) --i;
            if (i < 0) { heading.dx = 1; i = 0; while (g.street_x(i) <= x && i < g.vertical_streets - 1) ++i; }
        }
    }

    TraceBuilder tb;
    tb.start(0.0, pos);

    // First segment: from the mid-block start to intersection (i, j).
    {
        Vec2 target{g.street_x(i), g.street_y(j)};
        if (distance(pos, target) > 1e-12) {
            double speed = quant6(rng.uniform(p.v_min, p.v_max));
            speed = std::clamp(speed, p.v_min, p.v_max);
            tb.move_to(target, speed);
        }
    }

    while (tb.now() < duration) {
        // At intersection (i, j): optional pause, then pick a direction.
        if (p.max_pause > 0.0 && rng.uniform() < p.p_pause) {
            double d = quant6(rng.uniform(0.0, p.max_pause));
            if (d > 0.0) tb.pause(d);
        }
        struct Option { Heading h; double w; };
        std::vector<Option> opts;
        if (heading_available(g, i, j, heading)) opts.push_back({heading, p.p_straight});
        if (Heading l = left_of(heading); heading_available(g, i, j, l)) opts.push_back({l, p.p_left});
        if (Heading r = right_of(heading); heading_available(g, i, j, r)) opts.push_back({r, p.p_right});
        if (opts.empty()) {
            // dead end: turn around
            opts.push_back({Heading{-heading.dx, -heading.dy}, 1.0});
        }
        double total = 0.0;
        for (const auto& o : opts) total += o.w;
        double r = rng.uniform() * total;
        Heading chosen = opts.back().h;
        for (const auto& o : opts) {
            if (r < o.w) { chosen = o.h; break; }
            r -= o.w;
        }
        heading = chosen;
        i += heading.dx;
        j += heading.dy;
        Vec2 target{g.street_x(i), g.street_y(j)};
        double speed = quant6(rng.uniform(p.v_min, p.v_max));
        speed = std::clamp(speed, p.v_min, p.v_max);
        tb.move_to(target, speed);
    }
    return tb.take();
}

} // namespace

MobilityScenario generate_manhattan(const GridSpec& grid,
                                    const MobilityParams& params,
                                    double duration, RngStream& rng) {
    if (params.v_min > params.v_max) {
        throw std::invalid_argument("generate_manhattan: v_min > v_max");
    }
    if (params.v_min <= 0.0 || duration <= 0.0) {
        throw std::invalid_argument("generate_manhattan: parameters must be positive");
    }
    if (grid.vertical_streets < 2 || grid.horizontal_streets < 2) {
        throw std::invalid_argument("generate_manhattan: need at least a 2x2 grid");
    }
    MobilityScenario s;
    s.grid = grid;
    s.duration = duration;
    s.traces.reserve(params.n_nodes);
    for (std::uint32_t n = 0; n < params.n_nodes; ++n) {
        s.traces.push_back(generate_trace(grid, params, duration, rng));
    }
    return s;
}

Vec2 position_at(const MobilityScenario& s, NodeId node, double t) {
    if (node >= s.traces.size()) {
        throw std::out_of_range("position_at: unknown node");
    }
    if (t < 0.0 || t > s.duration + 1e-9) {
        throw std::out_of_range("position_at: time outside [0, duration]");
    }
    const auto& tr = s.traces[node];
    if (tr.empty()) {
        throw std::runtime_error("position_at: node has no trace");
    }
    // last waypoint with at <= t
    auto it = std::upper_bound(tr.begin(), tr.end(), t,
                               [](double v, const Waypoint& w) { return v < w.at; });
    if (it == tr.begin()) return tr.front().pos;
    const Waypoint& cur = *(it - 1);
    if (it == tr.end() || cur.speed_to_next == 0.0) return cur.pos;
    const Waypoint& nxt = *it;
    double frac = (t - cur.at) / (nxt.at - cur.at);
    return {cur.pos.x + frac * (nxt.pos.x - cur.pos.x),
            cur.pos.y + frac * (nxt.pos.y - cur.pos.y)};
}

std::string export_ns2(const MobilityScenario& s) {
    std::string out;
    char buf[160];
    for (std::size_t n = 0; n < s.traces.size(); ++n) {
        const auto& tr = s.traces[n];
        if (tr.empty()) continue;
        std::snprintf(buf, sizeof buf, "$node_(%zu) set X_ %.6f\n", n, tr[0].pos.x);
        out += buf;
        std::snprintf(buf, sizeof buf, "$node_(%zu) set Y_ %.6f\n", n, tr[0].pos.y);
        out += buf;
        std::snprintf(buf, sizeof buf, "$node_(%zu) set Z_ %.6f\n", n, 0.0);
        out += buf;
        for (std::size_t k = 0; k + 1 < tr.size(); ++k) {
            const Waypoint& a = tr[k];
            const Waypoint& b = tr[k + 1];
            if (a.speed_to_next == 0.0) continue; // pause: no statement
            std::snprintf(buf, sizeof buf,
                          "$ns_ at %.9f \"$node_(%zu) setdest %.6f %.6f %.6f\"\n",
                          a.at, n, b.pos.x, b.pos.y, a.speed_to_next);
            out += buf;
        }
    }
    return out;
}

MobilityScenario import_ns2(const std::string& text) {
    static const std::regex init_re(
        R"(^\$node_\((\d+)\) set ([XYZ])_ ([-+0-9.eE]+)\s*$)");
    static const std::regex move_re(
        R"(^\$ns_ at ([-+0-9.eE]+) \"\$node_\((\d+)\) setdest ([-+0-9.eE]+) ([-+0-9.eE]+) ([-+0-9.eE]+)\"\s*$)");

    struct NodeData {
        std::optional<double> x, y;
        struct Move { double t, x, y, speed; int line; };
        std::vector<Move> moves;
    };
    std::map<std::size_t, NodeData> nodes;

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    auto fail = [&](const std::string& what) {
        std::ostringstream os;
        os << "import_ns2: line " << line_no << ": " << what;
        throw std::runtime_error(os.str());
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::smatch m;
        if (std::regex_match(line, m, init_re)) {
            std::size_t id = std::stoul(m[1]);
            double v = std::stod(m[3]);
            char axis = m[2].str()[0];
            if (axis == 'X') nodes[id].x = v;
            else if (axis == 'Y') nodes[id].y = v;
            // Z ignored (planar model)
        } else if (std::regex_match(line, m, move_re)) {
            double t = std::stod(m[1]);
            std::size_t id = std::stoul(m[2]);
            NodeData::Move mv{t, std::stod(m[3]), std::stod(m[4]),
                              std::stod(m[5]), line_no};
            if (t < 0.0) fail("negative time");
            nodes[id].moves.push_back(mv);
        } else {
            fail("malformed statement");
        }
    }

    MobilityScenario s;
    s.duration = 0.0;
    if (nodes.empty()) return s;
    std::size_t count = nodes.rbegin()->first + 1;
    s.traces.resize(count);
    for (auto& [id, nd] : nodes) {
        if (!nd.x || !nd.y) {
            std::ostringstream os;
            os << "import_ns2: node " << id << " missing initial position";
            throw std::runtime_error(os.str());
        }
        std::stable_sort(nd.moves.begin(), nd.moves.end(),
                         [](const auto& a, const auto& b) { return a.t < b.t; });
        std::vector<Waypoint> tr;
        tr.push_back({0.0, {*nd.x, *nd.y}, 0.0});
        for (const auto& mv : nd.moves) {
            line_no = mv.line;
            Vec2 cur = tr.back().pos;
            Vec2 target{mv.x, mv.y};
            double d = distance(cur, target);
            if (d < 1e-12) continue; // setdest to current position: no-op
            if (mv.speed <= 0.0) fail("non-positive speed on a nonzero-length move");
            if (mv.t < tr.back().at - 1e-9) fail("setdest before previous move completes");
            if (mv.t > tr.back().at + 1e-12) {
                tr.push_back({mv.t, cur, mv.speed});
            } else {
                tr.back().speed_to_next = mv.speed;
            }
            tr.push_back({tr.back().at + d / mv.speed, target, 0.0});
        }
        s.duration = std::max(s.duration, tr.back().at);
        s.traces[id] = std::move(tr);
    }
    return s;
}

} // namespace manet
