#pragma once

#include <array>
#include <cstdint>

#include "irg/graph.hpp"

namespace irg {

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011).
// A pure function of (counter, key); this is what makes every variate of a
// stream addressable by index.
struct Philox4x32 {
    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                              std::array<std::uint32_t, 2> key);
};

// Seeded stream of Unif[0,1) variates with a normative draw-order contract:
// variate index i-1 is the vertex weight W_i (i = 1..n), and variate index
// n + rank(i,j) is the pair uniform U_{ij}, where rank(i,j) is the ascending
// lexicographic rank of the pair (i,j), 1 <= i < j <= n.
//
// Variates are addressed by index through Philox, so the same seed yields a
// bit-identical sequence regardless of evaluation order or thread count.
class UniformStream {
public:
    explicit UniformStream(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    // W_i for i >= 1.
    double weight(Vertex i) const;

    // U_{ij} for 1 <= i < j <= n (arguments in either order).
    double pair_uniform(Vertex n, Vertex i, Vertex j) const;

    // Derives an independent child stream; used for per-trial seeds.
    UniformStream split(std::uint64_t child) const;

    bool operator==(const UniformStream&) const = default;

private:
    double variate(std::uint64_t index) const;

    std::uint64_t seed_;
};

// Lexicographic rank of (i,j) among pairs with 1 <= i < j <= n:
// (1,2) -> 0, (1,3) -> 1, ..., (n-1,n) -> n(n-1)/2 - 1.
std::uint64_t pair_rank(Vertex n, Vertex i, Vertex j);

} // namespace irg
