#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace levy::fft {

using cplx = std::complex<double>;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/** In-place radix-2 transform: a[j] <- sum_k a[k] exp(sign * 2*pi*i * j*k / n).
 *  n = a.size() must be a power of two; sign is +1 or -1. No 1/n scaling.
 *  Butterflies write disjoint slots, so the OpenMP version is bit-identical
 *  to transform_serial for any thread count. */
void transform(std::vector<cplx>& a, int sign);

/** Serial reference with the identical arithmetic order. */
void transform_serial(std::vector<cplx>& a, int sign);

} // namespace levy::fft
