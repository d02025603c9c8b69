#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "levy/errors.hpp"
#include "levy/fft.hpp"

using levy::fft::cplx;

namespace {

std::vector<cplx> naive_dft(const std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    std::vector<cplx> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        cplx acc{};
        for (std::size_t k = 0; k < n; ++k) {
            const double ang = sign * 2.0 * std::numbers::pi *
                               static_cast<double>(j * k % n) / static_cast<double>(n);
            acc += a[k] * std::polar(1.0, ang);
        }
        out[j] = acc;
    }
    return out;
}

std::vector<cplx> random_signal(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cplx> a(n);
    for (auto& v : a) v = {u(rng), u(rng)};
    return a;
}

} // namespace

TEST_CASE("fft matches the naive transform") {
    for (std::size_t n : {1u, 2u, 8u, 64u, 256u}) {
        auto a = random_signal(n, 7u + static_cast<unsigned>(n));
        const auto expect = naive_dft(a, 1);
        levy::fft::transform(a, 1);
        for (std::size_t j = 0; j < n; ++j)
            CHECK(std::abs(a[j] - expect[j]) < 1e-10 * static_cast<double>(n));
    }
}

TEST_CASE("fft round trip restores the signal") {
    auto a = random_signal(1024, 42);
    const auto original = a;
    levy::fft::transform(a, 1);
    levy::fft::transform(a, -1);
    for (std::size_t j = 0; j < a.size(); ++j)
        CHECK(std::abs(a[j] / 1024.0 - original[j]) < 1e-12);
}

TEST_CASE("parallel and serial fft agree bit for bit") {
    auto a = random_signal(1 << 14, 3);
    auto b = a;
    levy::fft::transform(a, 1);
    levy::fft::transform_serial(b, 1);
    for (std::size_t j = 0; j < a.size(); ++j) {
        CHECK(a[j].real() == b[j].real());
        CHECK(a[j].imag() == b[j].imag());
    }
}

TEST_CASE("fft rejects unusable arguments") {
    std::vector<cplx> bad(3);
    CHECK_THROWS_AS(levy::fft::transform(bad, 1), levy::ConfigError);
    std::vector<cplx> ok(4);
    CHECK_THROWS_AS(levy::fft::transform(ok, 2), levy::ConfigError);
}
