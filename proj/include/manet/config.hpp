#ifndef MANET_CONFIG_HPP
#define MANET_CONFIG_HPP

#include "manet/aodv.hpp"
#include "manet/dsdv.hpp"
#include "manet/dsr.hpp"
#include "manet/mac.hpp"
#include "manet/mobility.hpp"

#include <cstdint>
#include <string>

namespace manet {

enum class Protocol { Aodv, Dsr, Dsdv };

const char* to_string(Protocol p);
Protocol protocol_from_string(const std::string& s);

/**
 * Everything a single run needs. Defaults reproduce the reference setup:
 * 100 s, 500x500 m, 250 m range, speeds 5-20 m/s, 512 B CBR at 4 pkt/s.
 * A config naming only the protocol runs that setup unchanged.
 */
struct ScenarioConfig {
    Protocol protocol = Protocol::Aodv;
    std::uint32_t n_nodes = 10;
    std::uint32_t max_conn = 8;
    double pause = 0.0; // max pause at intersections, the swept parameter
    double v_min = 5.0;
    double v_max = 20.0;
    double duration = 100.0;
    std::uint64_t seed = 1;

    GridSpec grid; // area bounds and street counts
    double p_pause = 0.5;
    double p_straight = 0.5;
    double p_left = 0.25;
    double p_right = 0.25;

    MacConfig mac;

    double cbr_rate = 4.0;
    std::uint32_t payload = 512;

    AodvConfig aodv;
    DsrConfig dsr;
    DsdvConfig dsdv;

    /// Enable per-second loop-freedom snapshots and related checks.
    bool validate_invariants = false;

    /// Throws std::invalid_argument when inconsistent.
    void check() const;

    MobilityParams mobility_params() const {
        MobilityParams p;
        p.n_nodes = n_nodes;
        p.v_min = v_min;
        p.v_max = v_max;
        p.max_pause = pause;
        p.p_pause = p_pause;
        p.p_straight = p_straight;
        p.p_left = p_left;
        p.p_right = p_right;
        return p;
    }

    /// Parse the JSON configuration text; unknown keys are rejected.
    static ScenarioConfig from_json_text(const std::string& text);
    static ScenarioConfig from_file(const std::string& path);
};

} // namespace manet

#endif // MANET_CONFIG_HPP
