#ifndef MANET_MOBILITY_HPP
#define MANET_MOBILITY_HPP

#include "manet/rng.hpp"
#include "manet/types.hpp"

#include <string>
#include <vector>

namespace manet {

/**
 * Street grid: `vertical_streets` equally spaced vertical lines and
 * `horizontal_streets` horizontal lines covering [0,width] x [0,height].
 * Default is a 6x6 grid on 500x500 m, i.e. 100 m blocks.
 */
struct GridSpec {
    double width = 500.0;
    double height = 500.0;
    int vertical_streets = 6;
    int horizontal_streets = 6;

    double street_x(int i) const {
        return width * static_cast<double>(i) / (vertical_streets - 1);
    }
    double street_y(int j) const {
        return height * static_cast<double>(j) / (horizontal_streets - 1);
    }
};

/// One point of a piecewise-linear trace. speed_to_next is 0 while paused
/// and for the final waypoint.
struct Waypoint {
    double at = 0.0;
    Vec2 pos;
    double speed_to_next = 0.0;
};

struct MobilityParams {
    std::uint32_t n_nodes = 10;
    double v_min = 5.0;
    double v_max = 20.0;
    double max_pause = 0.0;
    double p_pause = 0.5;
    double p_straight = 0.5;
    double p_left = 0.25;
    double p_right = 0.25;
};

struct MobilityScenario {
    GridSpec grid;
    double duration = 100.0;
    std::vector<std::vector<Waypoint>> traces; // one per node, times ascending
};

/// Build a Manhattan Grid scenario: nodes start uniformly on streets, move
/// between adjacent intersections at per-segment uniform[v_min,v_max] speed,
/// turn probabilistically at intersections and may pause there.
MobilityScenario generate_manhattan(const GridSpec& grid,
                                    const MobilityParams& params,
                                    double duration, RngStream& rng);

/// Interpolated position of `node` at time t in [0, duration].
Vec2 position_at(const MobilityScenario& s, NodeId node, double t);

/// ns-2 movement script text ("$node_(i) set X_ ..." / "$ns_ at t setdest").
std::string export_ns2(const MobilityScenario& s);

/// Parse ns-2 movement script text back into a scenario. Throws
/// std::runtime_error naming the offending line on malformed input.
MobilityScenario import_ns2(const std::string& text);

} // namespace manet

#endif // MANET_MOBILITY_HPP
