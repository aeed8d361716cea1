#pragma once
#include <cmath>
#include <cstdint>

namespace hcu {

// Counter-based random numbers. Every draw is a pure function of
// (key, counter), so fields and noise streams are reproducible
// independent of traversal order and thread count.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_mix(std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(a) ^ (b + 0x9e3779b97f4a7c15ull));
}

inline std::uint64_t hash_mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return hash_mix(hash_mix(a, b), c);
}

inline std::uint64_t hash_mix(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                              std::uint64_t d) {
    return hash_mix(hash_mix(a, b, c), d);
}

// Uniform in [0, 1) with 53 bits of mantissa.
inline double u64_to_unit(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

inline double counter_uniform(std::uint64_t key, std::uint64_t ctr) {
    return u64_to_unit(hash_mix(key, ctr));
}

// Standard normal via Box-Muller on two hashed uniforms.
inline double counter_normal(std::uint64_t key, std::uint64_t ctr) {
    const double u1 = u64_to_unit(hash_mix(key, ctr, 0x6e6f726d31ull));
    const double u2 = u64_to_unit(hash_mix(key, ctr, 0x6e6f726d32ull));
    const double r = std::sqrt(-2.0 * std::log1p(-u1)); // u1 in [0,1) -> 1-u1 in (0,1]
    return r * std::cos(6.283185307179586476925286766559 * u2);
}

// Derived stream key for independent runs under one master seed.
inline std::uint64_t derive_stream(std::uint64_t master_seed, std::uint64_t run_index) {
    return hash_mix(master_seed, run_index, 0x73747265616dull);
}

// Small sequential generator for initial conditions and the like.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}
    std::uint64_t next_u64() { return hash_mix(key_, ctr_++); }
    double uniform() { return u64_to_unit(next_u64()); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal() { return counter_normal(key_, ctr_++); }

private:
    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
};

} // namespace hcu
