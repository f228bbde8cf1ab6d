#pragma once

#include <cstdint>

namespace concbound {

// Counter-based generator in the SplitMix64 family: every output is a pure
// function of (key, counter), so substreams keyed by (seed, stream, a, b)
// never share state and parallel consumers stay reproducible.
class CounterRng {
public:
    // stream tags used across the library
    static constexpr std::uint64_t kCellStream = 1;       // matrix cells, a = replication, b = row
    static constexpr std::uint64_t kBootstrapStream = 2;  // bootstrap resampling, a = target index
    static constexpr std::uint64_t kCheckStream = 3;      // per-check seed derivation

    CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t a = 0,
               std::uint64_t b = 0)
        : state_(derive_key(seed, stream, a, b)) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }

    // uniform in [0, 1)
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in (0, 1]
    double next_unit_open0() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    double next_sign() { return (next_u64() >> 63) ? 1.0 : -1.0; }

    // uniform index in [0, bound); bound must be >= 1
    std::uint64_t next_below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ull;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebull;
        z ^= z >> 31;
        return z;
    }

    static std::uint64_t combine(std::uint64_t h, std::uint64_t w) {
        return mix(h ^ (w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2)));
    }

    static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream, std::uint64_t a,
                                    std::uint64_t b) {
        return combine(combine(combine(mix(seed + 0x9e3779b97f4a7c15ull), stream), a), b);
    }

private:
    std::uint64_t state_;
};

// Stable per-check seed so independent checks draw from disjoint substreams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return CounterRng::derive_key(seed, CounterRng::kCheckStream, index, 0);
}

}  // namespace concbound
