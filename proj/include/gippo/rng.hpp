#pragma once

#include <cstdint>
#include <random>

namespace gippo {

// splitmix64 finalizer; full-period mixer used to derive stream seeds.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Deterministic, platform-independent generator. Each optimizer iteration
// draws from its own stream derived from (master seed, iteration index), so
// results do not depend on how iterations are scheduled across threads.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    static Rng for_stream(uint64_t master_seed, uint64_t stream) {
        return Rng(splitmix64(master_seed ^ splitmix64(stream)));
    }

    uint64_t next() { return eng_(); }

    // Unbiased-enough bounded draw (Lemire multiply-shift). The mapping is
    // exact and identical on every platform, unlike std::uniform_int_distribution.
    uint64_t bounded(uint64_t n) {
        return static_cast<uint64_t>(
            (static_cast<unsigned __int128>(next()) * static_cast<unsigned __int128>(n)) >> 64);
    }

private:
    std::mt19937_64 eng_;  // sequence pinned by the standard
};

}  // namespace gippo
