#include "dianet/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dianet {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k) {
    // splitmix64 advances its state by the golden gamma per output, so the
    // k-th output is available in closed form.
    return splitmix64_mix(seed + (k + 1) * kGolden);
}

Rng::Rng(std::uint64_t seed) {
    for (int i = 0; i < 4; ++i) {
        state_[i] = derive_seed(seed, static_cast<std::uint64_t>(i));
    }
}

std::uint64_t Rng::next_u64() {
    std::uint64_t* s = state_;
    const std::uint64_t result = rotl(s[1] * 5, 7) * 9;
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return result;
}

double Rng::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::size_t Rng::next_index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("Rng::next_index: n must be >= 1");
    return static_cast<std::size_t>(next_u64() % static_cast<std::uint64_t>(n));
}

bool Rng::next_bernoulli(double p) {
    return next_double() < p;
}

double Rng::next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
}

double Rng::next_normal() {
    // u1 in (0, 1] so the log is finite.
    const double u1 = 1.0 - next_double();
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::next_normal(double mean, double sd) {
    return mean + sd * next_normal();
}

}  // namespace dianet
