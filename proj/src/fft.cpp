#include "levy/fft.hpp"

#include <numbers>
#include <utility>

#include "levy/errors.hpp"
#include "levy/parallel.hpp"

namespace levy::fft {

namespace {

void bit_reverse(std::vector<cplx>& a) {
    const std::size_t n = a.size();
    std::size_t j = 0;
    for (std::size_t i = 1; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
}

// roots[j] = exp(sign * 2*pi*i * j / n) for j < n/2, each from its exact angle
std::vector<cplx> root_table(std::size_t n, int sign, bool parallel) {
    std::vector<cplx> roots(n / 2);
    const double base = sign * 2.0 * std::numbers::pi / static_cast<double>(n);
    auto fill = [&](std::size_t j) {
        roots[j] = std::polar(1.0, base * static_cast<double>(j));
    };
    if (parallel) {
        par::parallel_for(roots.size(), fill);
    } else {
        for (std::size_t j = 0; j < roots.size(); ++j) fill(j);
    }
    return roots;
}

void run(std::vector<cplx>& a, int sign, bool parallel) {
    const std::size_t n = a.size();
    if (!is_pow2(n)) throw ConfigError("fft: length must be a power of two");
    if (sign != 1 && sign != -1) throw ConfigError("fft: sign must be +1 or -1");
    if (n == 1) return;

    bit_reverse(a);
    const auto roots = root_table(n, sign, parallel);

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n / len;
        const std::size_t nblocks = n / len;
        auto bfly = [&](std::size_t b, std::size_t j) {
            const std::size_t i = b * len + j;
            const cplx t = roots[j * stride] * a[i + half];
            const cplx u = a[i];
            a[i] = u + t;
            a[i + half] = u - t;
        };
#ifdef _OPENMP
        if (parallel) {
            const long long nb = static_cast<long long>(nblocks);
            const long long nh = static_cast<long long>(half);
#pragma omp parallel for collapse(2) schedule(static)
            for (long long b = 0; b < nb; ++b)
                for (long long j = 0; j < nh; ++j)
                    bfly(static_cast<std::size_t>(b), static_cast<std::size_t>(j));
            continue;
        }
#endif
        for (std::size_t b = 0; b < nblocks; ++b)
            for (std::size_t j = 0; j < half; ++j) bfly(b, j);
    }
}

} // namespace

void transform(std::vector<cplx>& a, int sign) { run(a, sign, true); }

void transform_serial(std::vector<cplx>& a, int sign) { run(a, sign, false); }

} // namespace levy::fft
