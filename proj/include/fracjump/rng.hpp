#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace fracjump {

/// Avalanche mixer (SplitMix64 finalizer). Used both as the output
/// stage of the stream generator and to derive child seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream key from (seed, index). Monte Carlo
/// paths are keyed by (master_seed, path_index) so path i's stream does
/// not depend on how many paths ran before it or on thread scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(mix64(seed) ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
}

/// Counter-based uniform random stream: output n is a pure function of
/// (key, n), so realizations are reproducible across runs and thread counts.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t key) : key_(key) {}

    std::uint64_t next_u64() { return mix64(key_ + 0x9E3779B97F4A7C15ULL * counter_++); }

    /// Uniform draw in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform draw in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Exponential draw with the given rate (rate > 0).
    double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

    /// Standard normal via Box-Muller (no state carried between calls).
    double normal() {
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    /// Index draw from unnormalized nonnegative weights.
    std::size_t categorical(std::span<const double> weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        double u = uniform01() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) return i;
        }
        return weights.empty() ? 0 : weights.size() - 1;
    }

    /// Uniform direction on the unit sphere in R^d (d = 1 gives ±1).
    std::vector<double> unit_direction(int dim) {
        std::vector<double> v(static_cast<std::size_t>(dim));
        if (dim == 1) {
            v[0] = uniform01() < 0.5 ? -1.0 : 1.0;
            return v;
        }
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (auto& x : v) {
                x = normal();
                norm2 += x * x;
            }
        } while (norm2 == 0.0);
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& x : v) x *= inv;
        return v;
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace fracjump
