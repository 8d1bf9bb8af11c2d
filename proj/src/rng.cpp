#include "irg/rng.hpp"

namespace irg {

namespace {

constexpr std::uint32_t kMult0 = 0xD2511F53u;
constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

// Counter word 2 separates the variate index space from stream splitting.
constexpr std::uint32_t kDomainDraw = 0u;
constexpr std::uint32_t kDomainSplit = 1u;

inline void round_once(std::array<std::uint32_t, 4>& x, const std::array<std::uint32_t, 2>& k) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMult0) * x[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMult1) * x[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    x = {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
}

inline std::uint64_t block64(std::uint64_t seed, std::uint64_t index, std::uint32_t domain) {
    const auto out = Philox4x32::block(
        {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), domain, 0u},
        {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
    return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

} // namespace

std::array<std::uint32_t, 4> Philox4x32::block(std::array<std::uint32_t, 4> counter,
                                               std::array<std::uint32_t, 2> key) {
    for (int r = 0; r < 10; ++r) {
        round_once(counter, key);
        if (r != 9) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
    }
    return counter;
}

double UniformStream::variate(std::uint64_t index) const {
    // Top 53 bits of the 64-bit output, scaled into [0,1).
    return static_cast<double>(block64(seed_, index, kDomainDraw) >> 11) * 0x1.0p-53;
}

double UniformStream::weight(Vertex i) const {
    return variate(static_cast<std::uint64_t>(i) - 1);
}

double UniformStream::pair_uniform(Vertex n, Vertex i, Vertex j) const {
    return variate(static_cast<std::uint64_t>(n) + pair_rank(n, i, j));
}

UniformStream UniformStream::split(std::uint64_t child) const {
    return UniformStream(block64(seed_, child, kDomainSplit));
}

std::uint64_t pair_rank(Vertex n, Vertex i, Vertex j) {
    if (i > j) std::swap(i, j);
    const std::uint64_t a = i;
    const std::uint64_t b = j;
    // Pairs (1,2)...(1,n) come first, then (2,3)... — ascending lexicographic.
    return (a - 1) * (2 * static_cast<std::uint64_t>(n) - a) / 2 + (b - a - 1);
}

} // namespace irg
