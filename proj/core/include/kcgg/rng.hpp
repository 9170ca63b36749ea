#pragma once

#include <cstdint>
#include <cstddef>

namespace kcgg {

/// Self-contained xoshiro256++ generator with Box-Muller normals. The
/// standard-library distributions are implementation-defined, so all
/// randomness in the project goes through this class to keep seeded runs
/// bitwise reproducible across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) { reseed(seed, 0); }
    Rng(std::uint64_t seed, std::uint64_t stream) { reseed(seed, stream); }

    void reseed(std::uint64_t seed, std::uint64_t stream);

    /// Derives an independent generator for a sub-stream (batch element,
    /// episode index, ...). Derivation depends only on the constructor seed,
    /// not on how much this generator has been consumed.
    Rng split(std::uint64_t stream) const { return Rng(seed_, mix(stream_, stream)); }

    std::uint64_t next_u64();

    /// Uniform double in [0, 1).
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (pairs cached).
    double normal();

    /// Uniform integer in [0, n). n must be > 0.
    std::size_t uniform_index(std::size_t n);

    static std::uint64_t mix(std::uint64_t a, std::uint64_t b);

private:
    std::uint64_t state_[4] = {};
    std::uint64_t seed_ = 0;
    std::uint64_t stream_ = 0;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

} // namespace kcgg
