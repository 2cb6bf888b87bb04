#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string_view>

namespace gcmt {

namespace detail {

/// splitmix64 step, used for seeding and stream derivation.
inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
}

/// FNV-1a over a string, for purpose tags in stream derivation.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace detail

/// Deterministic, portable random generator (xoshiro256++ seeded via
/// splitmix64). Identical seeds produce identical streams on every platform;
/// no std::* distributions are used anywhere.
///
/// Stream splitting: derive_stream(purpose, a, b) hashes
/// (seed, fnv1a(purpose), a, b) through splitmix64 into a fresh seed, so the
/// init / shuffle / augment streams are independent and reproducible. The
/// full generator state is 4 words plus the originating seed and can be
/// serialized exactly.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : seed_(seed) {
        std::uint64_t sm = seed;
        for (auto& w : state_) w = detail::splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl64(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl64(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in (0, 1]; safe as a log() argument.
    double uniform01_pos() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    /// Uniform integer in [0, n), unbiased via rejection.
    std::uint64_t uniform_int(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    /// Standard normal via Box-Muller. Consumes exactly two draws per call
    /// (the sine branch is discarded) so stream positions stay predictable.
    double normal() {
        const double u1 = uniform01_pos();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    double normal(double mean, double stddev) {
        return mean + stddev * normal();
    }

    /// Child generator for a named purpose; independent of this stream's
    /// position. Indices distinguish e.g. (phase, epoch) substreams.
    Rng derive_stream(std::string_view purpose, std::uint64_t a = 0, std::uint64_t b = 0) const {
        std::uint64_t sm = seed_ ^ detail::fnv1a64(purpose);
        std::uint64_t h = detail::splitmix64(sm);
        sm = h ^ (a + 0x9e3779b97f4a7c15ULL);
        h = detail::splitmix64(sm);
        sm = h ^ (b + 0x3c6ef372fe94f82aULL);
        return Rng(detail::splitmix64(sm));
    }

    std::uint64_t seed() const { return seed_; }
    const std::array<std::uint64_t, 4>& state() const { return state_; }
    void set_state(const std::array<std::uint64_t, 4>& s) { state_ = s; }

private:
    std::uint64_t seed_;
    std::array<std::uint64_t, 4> state_{};
};

} // namespace gcmt
