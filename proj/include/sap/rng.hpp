#pragma once

// Deterministic random streams. Every stochastic stage of the pipeline
// (weight init, channel noise, calibration draws) pulls from a stream
// derived from (seed, purpose tag, indices), so results are independent
// of scheduling and identical across runs and platforms.

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string_view>

namespace sap {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ seeded through splitmix64.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64_next(sm);
        // All-zero state would be absorbing; splitmix64 cannot emit four
        // zero words from any seed, but keep the guard cheap and explicit.
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0,1), 53 bits of precision.
    double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double next_uniform(double lo, double hi) {
        return lo + (hi - lo) * next_unit();
    }

    // Unbiased integer in [0, n) via rejection.
    std::uint64_t next_index(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("next_index: n must be positive");
        const std::uint64_t limit = ~std::uint64_t(0) - ~std::uint64_t(0) % n;
        std::uint64_t v;
        do { v = next_u64(); } while (v >= limit);
        return v % n;
    }

    // Standard normal via Box-Muller; caches the second deviate so a
    // stream yields the same sequence regardless of call grouping.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u1 in (0,1] keeps log() finite.
        const double u1 = 1.0 - next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_{};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Collapses a tag and index list into one 64-bit stream key. FNV-1a over
// the tag bytes, then each index folded in through splitmix64 steps.
inline std::uint64_t stream_key(std::uint64_t seed, std::string_view tag,
                                std::initializer_list<std::uint64_t> ids = {}) {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    for (std::uint64_t id : ids) {
        h ^= id + 0x9e3779b97f4a7c15ULL;
        std::uint64_t st = h;
        h = splitmix64_next(st);
    }
    return h;
}

inline Rng derive_rng(std::uint64_t seed, std::string_view tag,
                      std::initializer_list<std::uint64_t> ids = {}) {
    return Rng(stream_key(seed, tag, ids));
}

}  // namespace sap
