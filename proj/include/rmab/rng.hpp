#pragma once

#include <cstdint>

// Deterministic, platform-independent random streams.
//
// Every random draw in this library comes from an RngStream constructed
// from an explicit 64-bit key. Keys are derived from a user seed plus
// integer tags (replication index, time step, trajectory index, ...), so
// any component can be re-run in isolation and results do not depend on
// execution order. The generator is xoshiro256++ seeded through
// splitmix64, both from Blackman & Vigna's public-domain reference code.

namespace rmab {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Mixes a seed and up to three tags into a stream key. Mixing each tag
// through splitmix64 keeps nearby (seed, tag) combinations uncorrelated.
inline std::uint64_t derive_key(std::uint64_t seed, std::uint64_t tag_a = 0,
                                std::uint64_t tag_b = 0, std::uint64_t tag_c = 0) {
    std::uint64_t s = seed;
    std::uint64_t k = splitmix64_next(s);
    s ^= tag_a + 0x9e3779b97f4a7c15ull;
    k ^= splitmix64_next(s);
    s ^= tag_b + 0xd1b54a32d192ed03ull;
    k ^= splitmix64_next(s);
    s ^= tag_c + 0x8bb84b93962eacc9ull;
    k ^= splitmix64_next(s);
    return k;
}

class RngStream {
public:
    explicit RngStream(std::uint64_t key) {
        // Expand the key into four state words; xoshiro must not start
        // from the all-zero state, which splitmix64 never produces here.
        for (auto& w : state_) w = splitmix64_next(key);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform double in [0, 1), using the top 53 bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4];
};

}  // namespace rmab
