#include "manet/config.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace manet {

const char* to_string(Protocol p) {
    switch (p) {
    case Protocol::Aodv: return "aodv";
    case Protocol::Dsr: return "dsr";
    case Protocol::Dsdv: return "dsdv";
    }
    return "?";
}

Protocol protocol_from_string(const std::string& s) {
    if (s == "aodv") return Protocol::Aodv;
    if (s == "dsr") return Protocol::Dsr;
    if (s == "dsdv") return Protocol::Dsdv;
    throw std::invalid_argument("unknown protocol '" + s + "' (aodv|dsr|dsdv)");
}

void ScenarioConfig::check() const {
    auto bad = [](const std::string& what) {
        throw std::invalid_argument("config: " + what);
    };
    if (n_nodes == 0) bad("n_nodes must be > 0");
    if (max_conn > 0 && n_nodes < 2) bad("connections need at least 2 nodes");
    if (v_min <= 0 || v_min > v_max) bad("require 0 < v_min <= v_max");
    if (pause < 0) bad("pause must be >= 0");
    if (duration <= 0) bad("duration must be > 0");
    if (grid.width <= 0 || grid.height <= 0) bad("area must be positive");
    if (grid.vertical_streets < 2 || grid.horizontal_streets < 2)
        bad("need at least 2 streets per axis");
    if (mac.range <= 0 || mac.bitrate <= 0) bad("mac range/bitrate must be > 0");
    if (mac.cw_min == 0 || mac.cw_min > mac.cw_max) bad("require 0 < cw_min <= cw_max");
    if (mac.ifq_len == 0) bad("ifq_len must be > 0");
    if (cbr_rate <= 0) bad("cbr rate must be > 0");
    if (payload == 0) bad("payload must be > 0");
    if (p_pause < 0 || p_pause > 1) bad("p_pause must be in [0,1]");
    if (p_straight < 0 || p_left < 0 || p_right < 0 ||
        p_straight + p_left + p_right <= 0)
        bad("turn probabilities must be non-negative and not all zero");
}

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& known,
                    const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.count(it.key())) {
            throw std::invalid_argument("config: unknown key '" + it.key() +
                                        "' in " + where);
        }
    }
}

template <typename T>
void get_to(const json& j, const char* key, T& out) {
    if (j.contains(key)) j.at(key).get_to(out);
}

} // namespace

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
    json j = json::parse(text);
    ScenarioConfig c;
    reject_unknown(j,
                   {"protocol", "nodes", "max_connections", "pause", "v_min",
                    "v_max", "duration", "seed", "area", "grid", "mobility",
                    "mac", "traffic", "aodv", "dsr", "dsdv", "validate"},
                   "top level");
    if (j.contains("protocol")) {
        c.protocol = protocol_from_string(j.at("protocol").get<std::string>());
    }
    get_to(j, "nodes", c.n_nodes);
    get_to(j, "max_connections", c.max_conn);
    get_to(j, "pause", c.pause);
    get_to(j, "v_min", c.v_min);
    get_to(j, "v_max", c.v_max);
    get_to(j, "duration", c.duration);
    get_to(j, "seed", c.seed);
    get_to(j, "validate", c.validate_invariants);
    if (j.contains("area")) {
        const json& a = j.at("area");
        reject_unknown(a, {"width", "height"}, "area");
        get_to(a, "width", c.grid.width);
        get_to(a, "height", c.grid.height);
    }
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        reject_unknown(g, {"vertical_streets", "horizontal_streets"}, "grid");
        get_to(g, "vertical_streets", c.grid.vertical_streets);
        get_to(g, "horizontal_streets", c.grid.horizontal_streets);
    }
    if (j.contains("mobility")) {
        const json& m = j.at("mobility");
        reject_unknown(m, {"p_pause", "p_straight", "p_left", "p_right"},
                       "mobility");
        get_to(m, "p_pause", c.p_pause);
        get_to(m, "p_straight", c.p_straight);
        get_to(m, "p_left", c.p_left);
        get_to(m, "p_right", c.p_right);
    }
    if (j.contains("mac")) {
        const json& m = j.at("mac");
        reject_unknown(m,
                       {"range", "cs_range", "bitrate", "slot", "difs", "cw_min", "cw_max",
                        "retry_limit", "ifq_len", "header_overhead",
                        "control_priority", "zero_backoff", "ignore_collisions"},
                       "mac");
        get_to(m, "range", c.mac.range);
        get_to(m, "cs_range", c.mac.cs_range);
        get_to(m, "bitrate", c.mac.bitrate);
        get_to(m, "slot", c.mac.slot);
        get_to(m, "difs", c.mac.difs);
        get_to(m, "cw_min", c.mac.cw_min);
        get_to(m, "cw_max", c.mac.cw_max);
        get_to(m, "retry_limit", c.mac.retry_limit);
        get_to(m, "ifq_len", c.mac.ifq_len);
        get_to(m, "header_overhead", c.mac.header_overhead);
        get_to(m, "control_priority", c.mac.control_priority);
        get_to(m, "zero_backoff", c.mac.zero_backoff);
        get_to(m, "ignore_collisions", c.mac.ignore_collisions);
    }
    if (j.contains("traffic")) {
        const json& t = j.at("traffic");
        reject_unknown(t, {"rate", "payload"}, "traffic");
        get_to(t, "rate", c.cbr_rate);
        get_to(t, "payload", c.payload);
    }
    if (j.contains("aodv")) {
        const json& a = j.at("aodv");
        reject_unknown(a,
                       {"active_route_timeout", "node_traversal", "net_ttl",
                        "net_retries", "buffer_cap", "buffer_ttl",
                        "fwd_jitter", "flush_spacing"},
                       "aodv");
        get_to(a, "active_route_timeout", c.aodv.active_route_timeout);
        get_to(a, "node_traversal", c.aodv.node_traversal);
        get_to(a, "net_ttl", c.aodv.net_ttl);
        get_to(a, "net_retries", c.aodv.net_retries);
        get_to(a, "buffer_cap", c.aodv.buffer_cap);
        get_to(a, "buffer_ttl", c.aodv.buffer_ttl);
        get_to(a, "fwd_jitter", c.aodv.fwd_jitter);
        get_to(a, "flush_spacing", c.aodv.flush_spacing);
    }
    if (j.contains("dsr")) {
        const json& d = j.at("dsr");
        reject_unknown(d,
                       {"cache_cap_per_dest", "cache_lifetime", "buffer_cap",
                        "buffer_ttl",
                        "rreq_timeout", "max_retries", "salvage_limit",
                        "fwd_jitter", "flush_spacing", "broken_link_ttl"},
                       "dsr");
        get_to(d, "cache_cap_per_dest", c.dsr.cache_cap_per_dest);
        get_to(d, "cache_lifetime", c.dsr.cache_lifetime);
        get_to(d, "buffer_cap", c.dsr.buffer_cap);
        get_to(d, "buffer_ttl", c.dsr.buffer_ttl);
        get_to(d, "rreq_timeout", c.dsr.rreq_timeout);
        get_to(d, "max_retries", c.dsr.max_retries);
        get_to(d, "salvage_limit", c.dsr.salvage_limit);
        get_to(d, "fwd_jitter", c.dsr.fwd_jitter);
        get_to(d, "flush_spacing", c.dsr.flush_spacing);
        get_to(d, "broken_link_ttl", c.dsr.broken_link_ttl);
    }
    if (j.contains("dsdv")) {
        const json& d = j.at("dsdv");
        reject_unknown(d,
                       {"update_interval", "full_dump_every", "settling_time",
                        "triggered_min_gap", "jitter"},
                       "dsdv");
        get_to(d, "update_interval", c.dsdv.update_interval);
        get_to(d, "full_dump_every", c.dsdv.full_dump_every);
        get_to(d, "settling_time", c.dsdv.settling_time);
        get_to(d, "triggered_min_gap", c.dsdv.triggered_min_gap);
        get_to(d, "jitter", c.dsdv.jitter);
    }
    c.check();
    return c;
}

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return from_json_text(os.str());
}

} // namespace manet
