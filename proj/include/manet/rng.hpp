#ifndef MANET_RNG_HPP
#define MANET_RNG_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace manet {

/**
 * Named, seeded random stream (PCG32).
 *
 * The stream is fully determined by (master seed, label); the same pair
 * yields the same draw sequence on every platform. Distinct labels select
 * distinct PCG increments, so streams with the same master seed do not
 * correlate. PCG32 is part of the external contract: traces produced with
 * one build replay identically elsewhere.
 */
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::string_view label);

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    /// Uniform double in [0, 1).
    double uniform();

    /// Uniform double in [a, b).
    double uniform(double a, double b);

    /// Uniform integer in [0, n); n must be > 0. Rejection-sampled, unbiased.
    std::uint32_t uniform_int(std::uint32_t n);

    const std::string& label() const { return label_; }

private:
    std::string label_;
    std::uint64_t state_;
    std::uint64_t inc_;
};

} // namespace manet

#endif // MANET_RNG_HPP
