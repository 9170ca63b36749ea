#include "kcgg/rng.hpp"

#include <cmath>

#include "kcgg/errors.hpp"

namespace kcgg {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

} // namespace

std::uint64_t Rng::mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    return splitmix64(x);
}

void Rng::reseed(std::uint64_t seed, std::uint64_t stream) {
    seed_ = seed;
    stream_ = stream;
    std::uint64_t x = mix(seed, stream);
    for (auto& s : state_) s = splitmix64(x);
    has_cached_normal_ = false;
}

std::uint64_t Rng::next_u64() {
    std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::uniform() {
    // 53 high bits -> double in [0, 1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    cached_normal_ = r * std::sin(theta);
    has_cached_normal_ = true;
    return r * std::cos(theta);
}

std::size_t Rng::uniform_index(std::size_t n) {
    if (n == 0) throw ContractError("Rng::uniform_index: n must be > 0");
    // Rejection-free modulo is fine here: n is tiny relative to 2^64 in all
    // call sites, so the bias is far below double precision effects.
    return static_cast<std::size_t>(next_u64() % n);
}

} // namespace kcgg
