#ifndef FXYZ_RNG_HPP
#define FXYZ_RNG_HPP

#include <cstdint>

namespace fxyz {

// Minimal deterministic generator (xorshift64*). Portable across platforms,
// unlike <random> distributions.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed * 2685821657736338717ULL + 1) {}
    double uniform() {
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        return static_cast<double>((state * 2685821657736338717ULL) >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

} // namespace fxyz

#endif
