#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace satrack {

// splitmix64 finalizer; used to derive independent seed streams.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Counter-based seed derivation: hashing the base seed with a path of
// indices (tag, run, episode, agent, ...) yields decorrelated streams, so
// adding runs or episodes never perturbs existing ones.
inline std::uint64_t seed_stream(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = mix64(base);
    for (std::uint64_t p : path) h = mix64(h ^ mix64(p));
    return h;
}

// Deterministic RNG: mt19937_64 (bit-exact per the standard) plus our own
// value conversions, so results do not depend on libstdc++'s distribution
// implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // [0, 1)
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // [0, n); n > 0. Modulo bias is < n / 2^64, irrelevant for simulation use.
    int uniform_int(int n) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(n)); }

private:
    std::mt19937_64 eng_;
};

}  // namespace satrack
