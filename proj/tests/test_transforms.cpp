#include <cmath>
#include <complex>

#include "doctest.h"
#include "levy/errors.hpp"
#include "levy/transforms.hpp"

using levy::cplx;

namespace {

cplx reference_call_what(double strike, cplx z) {
    const cplx iz(-z.imag(), z.real());
    return strike * std::exp(iz * std::log(strike)) / (iz * (1.0 + iz));
}

cplx reference_digital_what(double strike, cplx z) {
    const cplx iz(-z.imag(), z.real());
    return -std::exp(iz * std::log(strike)) / iz;
}

} // namespace

TEST_CASE("call transform matches its closed form and is separable") {
    const double strike = 95.0;
    const auto t = levy::call_transform(strike);
    CHECK(t.name == "call");
    CHECK(t.discounted);
    CHECK(t.strip_lo == doctest::Approx(1.0));
    CHECK(std::isinf(t.strip_hi));
    CHECK(t.scale == doctest::Approx(strike));
    CHECK(t.scale_of(130.0) == doctest::Approx(130.0));
    for (const cplx z : {cplx(2.0, 1.5), cplx(-7.25, 3.0), cplx(0.5, 1.01)}) {
        const cplx got = t.what(z);
        const cplx want = reference_call_what(strike, z);
        CHECK(std::abs(got - want) <= 1e-14 * std::abs(want));
        const cplx split = t.scale *
                           std::exp(cplx(0.0, 1.0) * z * t.log_strike) *
                           t.shape(z);
        CHECK(std::abs(got - split) == 0.0);
    }
}

TEST_CASE("digital transform matches its closed form") {
    const double strike = 100.0;
    const auto t = levy::digital_transform(strike);
    CHECK(t.name == "digital");
    CHECK_FALSE(t.discounted);
    CHECK(t.strip_lo == doctest::Approx(0.0));
    CHECK(std::isinf(t.strip_hi));
    CHECK(t.scale_of(42.0) == doctest::Approx(1.0));
    for (const cplx z : {cplx(1.0, 0.5), cplx(-3.5, 2.0)}) {
        const cplx got = t.what(z);
        const cplx want = reference_digital_what(strike, z);
        CHECK(std::abs(got - want) <= 1e-14 * std::abs(want));
    }
}

TEST_CASE("put parity rearranges the call value") {
    const double S = 100.0, K = 95.0, r = 0.05, tau = 0.75;
    const double call = 12.0;
    const double put = levy::put_price_via_parity(call, S, K, r, tau);
    CHECK(put == doctest::Approx(call - S + K * std::exp(-r * tau)));
    CHECK(levy::put_price_via_parity(put + S - K * std::exp(-r * tau), S, K, r,
                                     tau) == doctest::Approx(put));
}

TEST_CASE("transforms reject nonpositive strikes") {
    CHECK_THROWS_AS((void)levy::call_transform(0.0), levy::ConfigError);
    CHECK_THROWS_AS((void)levy::call_transform(-1.0), levy::ConfigError);
    CHECK_THROWS_AS((void)levy::digital_transform(0.0), levy::ConfigError);
    CHECK_THROWS_AS((void)levy::put_price_via_parity(1.0, 0.0, 95.0, 0.05, 1.0),
                    levy::ConfigError);
}
