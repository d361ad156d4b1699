#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "dianet/rng.hpp"

using dianet::Rng;

TEST_CASE("splitmix64 matches the published reference outputs") {
    // first outputs of the splitmix64 sequence seeded with 0
    CHECK(dianet::derive_seed(0, 0) == 0xe220a8397b1dcdafULL);
    CHECK(dianet::derive_seed(0, 1) == 0x6e789e6aa1b965f4ULL);
    CHECK(dianet::derive_seed(0, 2) == 0x06c45d188009454fULL);
    CHECK(dianet::derive_seed(0, 3) == 0xf88bb8a8724c81ecULL);
    CHECK(dianet::derive_seed(0, 4) == 0x1b39896a51a8749bULL);
    CHECK(dianet::derive_seed(42, 0) == 0xbdd732262feb6e95ULL);
    CHECK(dianet::derive_seed(42, 2) == 0x47526757130f9f52ULL);
}

TEST_CASE("xoshiro256** stream from a splitmix-seeded state") {
    Rng rng(12345);
    CHECK(rng.next_u64() == 0xbe6a36374160d49bULL);
    CHECK(rng.next_u64() == 0x214aaa0637a688c6ULL);
    CHECK(rng.next_u64() == 0xf69d16de9954d388ULL);

    Rng zero(0);
    CHECK(zero.next_u64() == 0x99ec5f36cb75f2b4ULL);
    CHECK(zero.next_u64() == 0xbf6e1f784956452aULL);
}

TEST_CASE("uniform doubles take the top 53 bits") {
    Rng rng(12345);
    CHECK(rng.next_double() == doctest::Approx(0.7438081631565894).epsilon(1e-15));
    CHECK(rng.next_double() == doctest::Approx(0.13004553462783452).epsilon(1e-15));
}

TEST_CASE("streams are deterministic per seed and distinct across seeds") {
    Rng a(7);
    Rng b(7);
    Rng c(8);
    bool all_equal = true;
    bool any_diff_seed = false;
    for (int i = 0; i < 100; ++i) {
        const auto va = a.next_u64();
        all_equal &= (va == b.next_u64());
        any_diff_seed |= (va != c.next_u64());
    }
    CHECK(all_equal);
    CHECK(any_diff_seed);
}

TEST_CASE("bounded draws stay in range") {
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.next_double();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(rng.next_index(7) < 7);
        const double v = rng.next_uniform(-2.0, 3.0);
        CHECK(v >= -2.0);
        CHECK(v < 3.0);
    }
}

TEST_CASE("normal draws have the requested moments") {
    Rng rng(11);
    const int n = 200000;
    double sum = 0.0;
    double ss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.next_normal(10.0, 2.0);
        sum += z;
        ss += z * z;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(ss / n - mean * mean);
    CHECK(mean == doctest::Approx(10.0).epsilon(0.005));
    CHECK(sd == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("shuffle is a seeded permutation") {
    std::vector<int> v(10);
    for (int i = 0; i < 10; ++i) v[i] = i;
    Rng rng(5);
    rng.shuffle(v);
    std::vector<int> w(10);
    for (int i = 0; i < 10; ++i) w[i] = i;
    Rng rng2(5);
    rng2.shuffle(w);
    CHECK(v == w);
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 10; ++i) CHECK(sorted[i] == i);
}
