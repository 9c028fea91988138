#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

#include "rupshock/errors.hpp"

namespace rupshock {

// One step of the splitmix64 sequence; advances `state` and returns the output.
constexpr std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Seeded random stream addressed by (seed, stream). The contract the rest of
// the library relies on:
//   - identical (seed, stream) -> bit-identical draw sequence;
//   - distinct stream ids under one seed -> independent streams, so parallel
//     replicates can each own stream (root + i) without coordination.
// Core generator is xoshiro256++ with splitmix64 state expansion.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {
        std::uint64_t x = seed;
        std::uint64_t h = splitmix64(x);
        x = h ^ (stream + 0xD1B54A32D192ED03ull);
        for (auto& word : state_) word = splitmix64(x);
    }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

    std::uint64_t next_u64() noexcept {
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

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + next_double() * (hi - lo); }

    bool bernoulli(double p) noexcept { return next_double() < p; }

    double exponential(double rate) {
        if (!(rate > 0.0)) raise(errc::bad_config, "exponential rate must be > 0");
        // 1 - U lies in (0, 1], so the log is finite.
        return -std::log(1.0 - next_double()) / rate;
    }

    // Standard normal via Box-Muller (two uniforms per call, no cached spare).
    double normal() noexcept {
        const double u1 = 1.0 - next_double();
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    // Gamma(shape, 1) via Marsaglia-Tsang, with the usual boost for shape < 1.
    double gamma(double shape) {
        if (!(shape > 0.0)) raise(errc::bad_config, "gamma shape must be > 0");
        if (shape < 1.0) {
            const double u = 1.0 - next_double();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x;
            double v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = 1.0 - next_double();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    // Beta(a, b). Zero shapes are point masses: a = 0 pins the draw at 0,
    // b = 0 (with a > 0) pins it at 1.
    double beta(double a, double b) {
        if (a < 0.0 || b < 0.0 || (a == 0.0 && b == 0.0))
            raise(errc::bad_config, "beta shapes must be nonnegative and not both zero");
        if (a == 0.0) return 0.0;
        if (b == 0.0) return 1.0;
        const double x = gamma(a);
        const double y = gamma(b);
        return x / (x + y);
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t state_[4];
};

// Index drawn proportionally to `weights`; `total` must equal their sum and be
// positive (the caller has already rejected empty urns). Floating slack at the
// top of the cumulative walk falls back to the last positive weight.
inline std::size_t sample_index(std::span<const double> weights, double total, RngStream& rng) {
    const double u = rng.next_double() * total;
    double acc = 0.0;
    std::size_t last_positive = weights.size();
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        acc += weights[i];
        last_positive = i;
        if (u < acc) return i;
    }
    return last_positive;
}

}  // namespace rupshock
