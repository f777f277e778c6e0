#ifndef MANET_TRAFFIC_HPP
#define MANET_TRAFFIC_HPP

#include "manet/rng.hpp"
#include "manet/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace manet {

struct Flow {
    NodeId src = 0;
    NodeId dst = 0;
    double start_at = 0.0;
    double rate = 4.0;             // packets per second
    std::uint32_t payload = 512;   // bytes
};

/**
 * cbrgen-equivalent: up to max_conn random CBR connections with distinct
 * (src, dst) pairs, src != dst, start times uniform in [0, 10) s. Gives up
 * on duplicates after 10 * max_conn draws, so fewer flows than max_conn can
 * come back on tiny node sets.
 */
std::vector<Flow> generate_connections(std::uint32_t n_nodes,
                                       std::uint32_t max_conn, double rate,
                                       std::uint32_t payload, RngStream& rng);

/// Serialize / parse the flow list (one `src dst start rate payload` line each).
std::string flows_to_text(const std::vector<Flow>& flows);
std::vector<Flow> flows_from_text(const std::string& text);

} // namespace manet

#endif // MANET_TRAFFIC_HPP
