#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace levy::par {

using cplx = std::complex<double>;

/** Reduction block size. Sums are formed as per-block partials combined in
 *  index order, so the result is bit-identical for any thread count and
 *  identical between the serial and OpenMP paths. */
inline constexpr std::size_t kBlock = 4096;

namespace detail {

// Sums f(k) over [lo, hi) with four interleaved accumulators. Both execution
// paths call this exact function, which pins the arithmetic order.
template <class F>
inline cplx strided_sum(std::size_t lo, std::size_t hi, F&& f) {
    cplx a0{}, a1{}, a2{}, a3{};
    std::size_t k = lo;
    for (; k + 4 <= hi; k += 4) {
        a0 += f(k);
        a1 += f(k + 1);
        a2 += f(k + 2);
        a3 += f(k + 3);
    }
    for (; k < hi; ++k) a0 += f(k);
    return (a0 + a1) + (a2 + a3);
}

} // namespace detail

/** Serial reference reduction: sum of f(k) for k in [0, n). */
template <class F>
cplx block_sum_serial(std::size_t n, F&& f) {
    const std::size_t nblocks = (n + kBlock - 1) / kBlock;
    cplx total{};
    for (std::size_t b = 0; b < nblocks; ++b) {
        const std::size_t lo = b * kBlock;
        const std::size_t hi = std::min(n, lo + kBlock);
        total += detail::strided_sum(lo, hi, f);
    }
    return total;
}

/** OpenMP reduction with the same block structure and combine order as the
 *  serial reference; falls back to it when OpenMP is unavailable. */
template <class F>
cplx block_sum(std::size_t n, F&& f) {
#ifdef _OPENMP
    const std::size_t nblocks = (n + kBlock - 1) / kBlock;
    if (nblocks > 1) {
        std::vector<cplx> partial(nblocks);
#pragma omp parallel for schedule(static)
        for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
            const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
            const std::size_t hi = std::min(n, lo + kBlock);
            partial[static_cast<std::size_t>(b)] = detail::strided_sum(lo, hi, f);
        }
        cplx total{};
        for (const cplx& p : partial) total += p;
        return total;
    }
#endif
    return block_sum_serial(n, f);
}

/** Runs f(k) for k in [0, n); iterations must write disjoint locations. */
template <class F>
void parallel_for(std::size_t n, F&& f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
    for (long long k = 0; k < static_cast<long long>(n); ++k)
        f(static_cast<std::size_t>(k));
#else
    for (std::size_t k = 0; k < n; ++k) f(k);
#endif
}

} // namespace levy::par
