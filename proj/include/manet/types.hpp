#ifndef MANET_TYPES_HPP
#define MANET_TYPES_HPP

#include <cmath>
#include <cstdint>

namespace manet {

using NodeId = std::uint32_t;

/// Broadcast address for MAC frames.
inline constexpr NodeId kBroadcast = 0xFFFFFFFFu;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Vec2& a, const Vec2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

} // namespace manet

#endif // MANET_TYPES_HPP
