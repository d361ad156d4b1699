#pragma once

#include <cstdint>
#include <vector>

namespace dianet {

// Deterministic 64-bit RNG used everywhere randomness is needed, so that runs
// are reproducible bit-for-bit across platforms and thread counts.
//
// Generator: xoshiro256** (Blackman & Vigna), state seeded with four
// consecutive outputs of splitmix64. Uniform doubles take the top 53 bits.
// Bounded integers use plain modulo (bias < 2^-32 for the sizes we draw).
// Normal deviates use Box-Muller consuming exactly two uniforms per value.

// Finalizer of splitmix64; also used to derive independent child seeds.
std::uint64_t splitmix64_mix(std::uint64_t z);

// k-th output (0-based) of a splitmix64 sequence started at `seed`.
// Used as the seed-derivation function: child streams of a root seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k);

class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    // Uniform in [0, 1), 53-bit resolution.
    double next_double();

    // Uniform integer in [0, n), n >= 1.
    std::size_t next_index(std::size_t n);

    bool next_bernoulli(double p);

    // Uniform in [lo, hi).
    double next_uniform(double lo, double hi);

    // Standard normal via Box-Muller; mean + sd * z for general draws.
    double next_normal();
    double next_normal(double mean, double sd);

    // Fisher-Yates, iterating from the back.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = next_index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::uint64_t state_[4];
};

}  // namespace dianet
