#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "qks/errors.hpp"

namespace qks {

inline long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

/// Torus fixed point of the 2^n-dimensional space: a k-subset of {1..n},
/// stored as a bitmask (bit i-1 set <=> site i in the subset).
struct FixedPoint {
    std::uint32_t mask = 0;
    int k = 0;
};

/// Canonical sector basis: all k-subsets of {1..n} ordered by increasing
/// bitmask value.  Every module indexes sector blocks this way.
inline std::vector<FixedPoint> enumerate_fixed_points(int n, int k) {
    if (n < 0 || k < 0 || k > n)
        throw QksError(ErrorCode::InvalidArgument, "enumerate_fixed_points: need 0 <= k <= n");
    std::vector<FixedPoint> out;
    out.reserve(static_cast<std::size_t>(binomial(n, k)));
    for (std::uint32_t m = 0; m < (1u << n); ++m)
        if (std::popcount(m) == k) out.push_back({m, k});
    return out;
}

/// Index of `mask` within the canonical ordering of its own sector.
inline int sector_rank(int n, std::uint32_t mask) {
    const int k = std::popcount(mask);
    int r = 0;
    for (std::uint32_t m = 0; m < mask; ++m)
        if (std::popcount(m) == k) ++r;
    (void)n;
    return r;
}

inline std::vector<int> mask_to_sites(std::uint32_t mask, int n) {
    std::vector<int> sites;
    for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) sites.push_back(i);
    return sites;
}

}  // namespace qks
