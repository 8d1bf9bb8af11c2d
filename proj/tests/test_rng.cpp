#include <doctest.h>

#include <cmath>
#include <set>

#include "irg/rng.hpp"

using namespace irg;

TEST_CASE("philox4x32-10 known-answer vectors") {
    // Reference vectors from the Random123 distribution (kat_vectors).
    auto out = Philox4x32::block({0, 0, 0, 0}, {0, 0});
    CHECK(out == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});

    out = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                            {0xffffffffu, 0xffffffffu});
    CHECK(out == std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});

    out = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                            {0xa4093822u, 0x299f31d0u});
    CHECK(out == std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("pair rank is the ascending lexicographic order") {
    CHECK(pair_rank(5, 1, 2) == 0);
    CHECK(pair_rank(5, 1, 5) == 3);
    CHECK(pair_rank(5, 2, 3) == 4);
    CHECK(pair_rank(5, 4, 5) == 9);
    CHECK(pair_rank(5, 5, 4) == 9); // order-insensitive arguments

    // Dense check of bijectivity for a few n.
    for (Vertex n : {2u, 3u, 7u, 12u}) {
        std::set<std::uint64_t> seen;
        for (Vertex i = 1; i <= n; ++i) {
            for (Vertex j = i + 1; j <= n; ++j) seen.insert(pair_rank(n, i, j));
        }
        CHECK(seen.size() == static_cast<std::size_t>(n) * (n - 1) / 2);
        CHECK(*seen.begin() == 0);
        CHECK(*seen.rbegin() == seen.size() - 1);
    }
}

TEST_CASE("streams are deterministic and addressable") {
    const UniformStream a(42), b(42), c(43);
    CHECK(a.weight(1) == b.weight(1));
    CHECK(a.weight(1000) == b.weight(1000));
    CHECK(a.pair_uniform(100, 3, 17) == b.pair_uniform(100, 3, 17));
    CHECK(a.weight(1) != c.weight(1));

    // Addressing is independent of evaluation order.
    const double direct = a.pair_uniform(50, 5, 9);
    double via_scan = -1;
    for (Vertex i = 1; i <= 50; ++i) {
        for (Vertex j = i + 1; j <= 50; ++j) {
            if (i == 5 && j == 9) via_scan = a.pair_uniform(50, i, j);
        }
    }
    CHECK(direct == via_scan);

    // Splits derive distinct, reproducible children.
    CHECK(a.split(0).seed() == b.split(0).seed());
    CHECK(a.split(0).seed() != a.split(1).seed());
    CHECK(a.split(0).weight(1) != a.weight(1));
}

TEST_CASE("variates are uniform on [0,1)") {
    const UniformStream s(7);
    const std::uint32_t n = 100000;
    double sum = 0, sumsq = 0;
    for (Vertex i = 1; i <= n; ++i) {
        const double w = s.weight(i);
        CHECK(w >= 0.0);
        CHECK(w < 1.0);
        sum += w;
        sumsq += w * w;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    // 4-sigma band for the mean of n Unif(0,1): sigma = 1/sqrt(12 n).
    CHECK(std::abs(mean - 0.5) < 4.0 / std::sqrt(12.0 * n));
    CHECK(std::abs(var - 1.0 / 12.0) < 0.002);
}
