#include "manet/rng.hpp"

#include <stdexcept>

namespace manet {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

} // namespace

RngStream::RngStream(std::uint64_t master_seed, std::string_view label)
    : label_(label) {
    if (label.empty()) {
        throw std::invalid_argument("RngStream: empty label");
    }
    std::uint64_t mix = master_seed ^ fnv1a64(label);
    state_ = splitmix64(mix);
    inc_ = splitmix64(mix) | 1u; // PCG increment must be odd
    // advance once so state depends on inc
    next_u32();
}

std::uint32_t RngStream::next_u32() {
    std::uint64_t old = state_;
    state_ = old * 6364136223846793005ull + inc_;
    std::uint32_t xorshifted =
        static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
}

std::uint64_t RngStream::next_u64() {
    std::uint64_t hi = next_u32();
    std::uint64_t lo = next_u32();
    return (hi << 32) | lo;
}

double RngStream::uniform() {
    // 53 random bits -> [0, 1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double a, double b) {
    return a + (b - a) * uniform();
}

std::uint32_t RngStream::uniform_int(std::uint32_t n) {
    if (n == 0) {
        throw std::invalid_argument("uniform_int: n must be > 0");
    }
    std::uint32_t threshold = (-n) % n;
    for (;;) {
        std::uint32_t r = next_u32();
        if (r >= threshold) {
            return r % n;
        }
    }
}

} // namespace manet
