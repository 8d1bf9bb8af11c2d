#pragma once

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <vector>

#include "irg/solvers.hpp"

namespace irg::detail {

enum class Tri { yes, no, unknown };

struct BudgetState {
    std::uint64_t node_limit;
    double time_limit_s;
    std::chrono::steady_clock::time_point start;
    std::uint64_t nodes = 0;
    bool exhausted = false;

    explicit BudgetState(const SolveBudget& b)
        : node_limit(b.node_limit), time_limit_s(b.time_limit_s),
          start(std::chrono::steady_clock::now()) {}

    // Counts one search node; returns false once the budget is exhausted.
    bool tick() {
        if (exhausted) return false;
        ++nodes;
        if (nodes > node_limit) {
            exhausted = true;
            return false;
        }
        if (std::isfinite(time_limit_s) && (nodes & 1023u) == 0) {
            if (elapsed() > time_limit_s) {
                exhausted = true;
                return false;
            }
        }
        return true;
    }

    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

// Fixed-capacity bitset over vertex positions, flat row storage.
struct BitRows {
    std::uint32_t n = 0;
    std::uint32_t words = 0;
    std::vector<std::uint64_t> bits; // n rows

    void init(std::uint32_t count) {
        n = count;
        words = (count + 63) / 64;
        bits.assign(static_cast<std::size_t>(n) * words, 0);
    }
    std::uint64_t* row(std::uint32_t v) { return bits.data() + static_cast<std::size_t>(v) * words; }
    const std::uint64_t* row(std::uint32_t v) const {
        return bits.data() + static_cast<std::size_t>(v) * words;
    }
    void set(std::uint32_t v, std::uint32_t u) { row(v)[u >> 6] |= 1ull << (u & 63); }
    bool test(std::uint32_t v, std::uint32_t u) const {
        return (row(v)[u >> 6] >> (u & 63)) & 1ull;
    }
};

inline std::uint32_t popcount_words(const std::uint64_t* w, std::uint32_t words) {
    std::uint32_t c = 0;
    for (std::uint32_t i = 0; i < words; ++i) c += static_cast<std::uint32_t>(std::popcount(w[i]));
    return c;
}

} // namespace irg::detail
