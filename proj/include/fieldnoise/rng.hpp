#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace fieldnoise {

/// SplitMix64 step; used for seeding and for deriving per-index streams.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept
{
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// xoshiro256** with explicit, platform-independent conversions to uniform,
/// exponential and normal variates. The standard library distributions are
/// deliberately not used: their output is implementation-defined.
///
/// Streams are identified by (seed, stream). Two generators with the same pair
/// produce the same sequence everywhere; different stream ids give
/// statistically independent sequences for the same seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
    {
        std::uint64_t sm = seed;
        const std::uint64_t mixed_seed = splitmix64(sm);
        std::uint64_t init = mixed_seed ^ (stream * 0xD1B54A32D192ED03ULL + 0x8BB84B93962EACC9ULL);
        for (auto& word : s_)
            word = splitmix64(init);
    }

    std::uint64_t next() noexcept
    {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]; safe as a logarithm argument.
    double uniform_open_zero() noexcept { return 1.0 - uniform(); }

    /// Exponential waiting time with the given rate.
    double exponential(double rate) noexcept { return -std::log(uniform_open_zero()) / rate; }

    /// Standard normal via the Box-Muller transform (one value per call).
    double normal() noexcept
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_open_zero()));
        const double phi = 2.0 * std::numbers::pi * uniform();
        spare_ = r * std::sin(phi);
        has_spare_ = true;
        return r * std::cos(phi);
    }

    bool bernoulli(double p) noexcept { return uniform() < p; }

    /// Binomial(n, p) by direct summation; intended for modest trial counts.
    std::uint64_t binomial(std::uint64_t n, double p) noexcept
    {
        std::uint64_t k = 0;
        for (std::uint64_t i = 0; i < n; ++i)
            k += bernoulli(p) ? 1 : 0;
        return k;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4]{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace fieldnoise
