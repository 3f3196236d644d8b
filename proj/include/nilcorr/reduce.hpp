#pragma once

// Deterministic parallel reduction.
//
// Work is cut into fixed-size blocks independent of the thread count; block
// partials are combined by a pairwise tree in index order.  The result is
// therefore bit-identical whether run with 1 thread or 64, and the pairwise
// tree keeps rounding error O(log n) instead of O(n).

#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nilcorr {

inline constexpr int64_t kReduceBlock = int64_t(1) << 14;

namespace detail {

template <class T>
T pairwise_combine(std::vector<T>& parts) {
    if (parts.empty()) return T{};
    std::size_t n = parts.size();
    while (n > 1) {
        std::size_t half = (n + 1) / 2;
        for (std::size_t i = 0; i + half < n; ++i) parts[i] = parts[i] + parts[i + half];
        n = half;
    }
    return parts[0];
}

}  // namespace detail

// Sum of block_fn(b_lo, b_hi) over [lo, hi) cut into kReduceBlock pieces.
// block_fn must be a pure function of its range.
template <class T, class BlockFn>
T blocked_reduce(int64_t lo, int64_t hi, BlockFn&& block_fn) {
    if (hi <= lo) return T{};
    const int64_t nblocks = (hi - lo + kReduceBlock - 1) / kReduceBlock;
    std::vector<T> parts(static_cast<std::size_t>(nblocks));
#pragma omp parallel for schedule(dynamic)
    for (int64_t b = 0; b < nblocks; ++b) {
        int64_t blo = lo + b * kReduceBlock;
        int64_t bhi = blo + kReduceBlock < hi ? blo + kReduceBlock : hi;
        parts[static_cast<std::size_t>(b)] = block_fn(blo, bhi);
    }
    return detail::pairwise_combine(parts);
}

// Sum of f(n) for n in [lo, hi), deterministic parallel.
template <class T, class Fn>
T indexed_sum(int64_t lo, int64_t hi, Fn&& f) {
    return blocked_reduce<T>(lo, hi, [&](int64_t blo, int64_t bhi) {
        T acc{};
        for (int64_t n = blo; n < bhi; ++n) acc = acc + f(n);
        return acc;
    });
}

}  // namespace nilcorr
