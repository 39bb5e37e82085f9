#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace asymcp {

// SplitMix64 finalizer; used to derive well-separated seeds from (master, indices...).
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic seed derivation: every replica / substream gets its own engine
// seeded by hashing the master seed together with a list of integer indices.
inline std::uint64_t seed_for(std::uint64_t master) { return mix64(master); }

template <typename... Rest>
std::uint64_t seed_for(std::uint64_t master, std::uint64_t idx, Rest... rest) {
    return seed_for(mix64(master ^ mix64(idx)), rest...);
}

// Thin wrapper over mt19937_64 with the distribution helpers the simulators
// need.  Distributions are hand-rolled from raw 64-bit draws so that results
// are bit-reproducible across standard library implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t raw() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Exponential with the given rate; strictly positive rate required.
    double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

    // Geometric on {1, 2, ...} with success probability 1/2 (fair-coin flips
    // until the first head, realized as the position of the lowest set bit).
    std::uint64_t geometric_half() {
        std::uint64_t bits = engine_();
        while (bits == 0) bits = engine_();
        return static_cast<std::uint64_t>(std::countr_zero(bits)) + 1;
    }

    bool bernoulli(double p) { return uniform01() < p; }

  private:
    std::mt19937_64 engine_;
};

// Arrival times of a Poisson process with the given rate on [0, horizon).
inline std::vector<double> poisson_times(double rate, double horizon, Rng& rng) {
    std::vector<double> times;
    if (rate <= 0.0) return times;
    double t = rng.exponential(rate);
    while (t < horizon) {
        times.push_back(t);
        t += rng.exponential(rate);
    }
    return times;
}

}  // namespace asymcp
