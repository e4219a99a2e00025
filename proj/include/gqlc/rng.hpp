#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace gqlc {

/// Deterministic splitmix64 generator. Substream keys derived from
/// (seed, stream index) give independent reproducible sequences, so results
/// do not depend on how work is split across threads.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Seed for the `stream`-th substream of `seed`. Nestable.
    static constexpr std::uint64_t substream(std::uint64_t seed, std::uint64_t stream) {
        return mix(mix(seed + 0x9e3779b97f4a7c15ULL) ^ (stream + 0xd1b54a32d192ed03ULL));
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    /// Uniform in [0, 1).
    double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

    bool next_bernoulli(double p) { return next_unit() < p; }

    /// Uniform integer in [0, bound), bound > 0.
    std::uint64_t next_below(std::uint64_t bound) {
        return std::uint64_t(((unsigned __int128)next_u64() * bound) >> 64);
    }

    /// Standard normal, Box-Muller. Pairs are cached, so draw counts matter
    /// for reproducibility; use one Rng per logical unit of work.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - next_unit();  // (0, 1], keeps log finite
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace gqlc
