#include <cmath>
#include <vector>

#include "doctest.h"
#include "levy/contour.hpp"
#include "levy/errors.hpp"
#include "levy/model.hpp"
#include "levy/oracle.hpp"
#include "levy/pricer.hpp"
#include "levy/transforms.hpp"

using levy::ContourSpec;
using levy::MarketState;
using levy::Measure;
using levy::ModelSpec;
using levy::PricingEngine;

namespace {

const MarketState kMkt{100.0, 0.05, 0.75};
constexpr double kSigma = 0.25;

ModelSpec bs_model() { return ModelSpec::black_scholes(kSigma); }

ContourSpec bs_contour(double v = 1.5, std::size_t n = 1 << 12) {
    return ContourSpec{v, 200.0, n, levy::Rule::simpson};
}

double oracle_call(double strike) {
    return levy::oracle::bs_value("price", kMkt.S, strike, kMkt.r, kMkt.tau,
                                  kSigma);
}

} // namespace

TEST_CASE("engine call values match the analytic curve across moneyness") {
    const PricingEngine eng(bs_model(), kMkt, bs_contour());
    for (const double strike : {60.0, 85.0, 100.0, 120.0, 165.0}) {
        const double got = eng.call_value(eng.log_moneyness(strike));
        CHECK(got == doctest::Approx(oracle_call(strike)).epsilon(1e-11));
    }
}

TEST_CASE("call values are invariant under contour shifts in the strip") {
    const PricingEngine lo(bs_model(), kMkt, bs_contour(1.2, 1 << 13));
    const PricingEngine hi(bs_model(), kMkt, bs_contour(2.8, 1 << 13));
    for (const double strike : {85.0, 110.0}) {
        const double a = lo.call_value(lo.log_moneyness(strike));
        const double b = hi.call_value(hi.log_moneyness(strike));
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
}

TEST_CASE("tails match the analytic normal tails and the dual-measure route") {
    const PricingEngine eng(bs_model(), kMkt, bs_contour());
    const ModelSpec dual_model = bs_model().esscher_dual();
    for (const double strike : {85.0, 100.0, 120.0}) {
        const double x = eng.log_moneyness(strike);
        CHECK(eng.tail(x, Measure::base) ==
              doctest::Approx(levy::oracle::bs_tail_q(x, kMkt.tau, kSigma))
                  .epsilon(1e-11));
        CHECK(eng.tail(x, Measure::dual) ==
              doctest::Approx(levy::oracle::bs_tail_dual(x, kMkt.tau, kSigma))
                  .epsilon(1e-11));
        // the dual tail is the base tail under the exponentially tilted model,
        // integrated one contour level lower
        const double via_dual_model =
            levy::tail_prob(dual_model, x, kMkt.tau, bs_contour(0.5),
                            Measure::base);
        CHECK(eng.tail(x, Measure::dual) ==
              doctest::Approx(via_dual_model).epsilon(1e-11));
    }
}

TEST_CASE("generalized pricing identity assembles the call from both tails") {
    const PricingEngine eng(bs_model(), kMkt, bs_contour());
    for (const double strike : {85.0, 100.0, 120.0}) {
        const double x = eng.log_moneyness(strike);
        const double via_tails =
            kMkt.S * (eng.tail(x, Measure::dual) -
                      std::exp(x) * eng.tail(x, Measure::base));
        CHECK(via_tails ==
              doctest::Approx(eng.call_value(x)).epsilon(1e-10));
        CHECK(levy::generalized_bs(bs_model(), kMkt, strike, bs_contour()) ==
              doctest::Approx(via_tails).epsilon(1e-12));
    }
}

TEST_CASE("densities match the Hermite closed forms") {
    const PricingEngine eng(bs_model(), kMkt, bs_contour());
    for (const double x : {-0.4, -0.1, 0.0, 0.2, 0.5}) {
        for (int n = 0; n <= 4; ++n) {
            const double want = levy::oracle::bs_density(x, kMkt.tau, kSigma, n);
            CHECK(eng.density(x, n) ==
                  doctest::Approx(want).epsilon(1e-10).scale(1.0));
        }
    }
}

TEST_CASE("fused bundle agrees with the single-quantity routes") {
    const PricingEngine eng(bs_model(), kMkt, bs_contour());
    const double x = eng.log_moneyness(110.0);
    const auto b = eng.base_bundle(x);
    CHECK(b.dual_valid);
    CHECK(b.imag_residual <= 1e-9);
    CHECK(b.q == doctest::Approx(eng.tail(x, Measure::base)).epsilon(1e-13));
    CHECK(b.q_dual == doctest::Approx(eng.tail(x, Measure::dual)).epsilon(1e-13));
    for (int n = 0; n <= 4; ++n)
        CHECK(b.f[n] == doctest::Approx(eng.density(x, n)).epsilon(1e-12));

    // psi-weighted integral is the maturity derivative of the density
    const auto density_at_tau = [&](double tau) {
        const PricingEngine e(bs_model(), MarketState{kMkt.S, kMkt.r, tau},
                              bs_contour());
        return e.density(x, 0);
    };
    const double fd = levy::oracle::finite_difference(density_at_tau, kMkt.tau,
                                                      1, 1e-5);
    CHECK(b.psi_w == doctest::Approx(fd).epsilon(1e-6));

    // a pure diffusion has no jump component in the maturity decomposition
    CHECK(b.theta_jump_w == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("payoff transforms price through the generic route") {
    const PricingEngine eng(bs_model(), kMkt, bs_contour());
    const double strike = 95.0;
    const double x = eng.log_moneyness(strike);
    CHECK(eng.payoff_value(levy::call_transform(strike)) ==
          doctest::Approx(eng.call_value(x)).epsilon(1e-13));
    CHECK(eng.payoff_value(levy::digital_transform(strike)) ==
          doctest::Approx(eng.digital_value(x)).epsilon(1e-13));
    CHECK(levy::price_european(bs_model(), kMkt, levy::call_transform(strike),
                               bs_contour()) ==
          doctest::Approx(oracle_call(strike)).epsilon(1e-11));
    CHECK(levy::call_price(bs_model(), kMkt, strike, bs_contour()) ==
          doctest::Approx(oracle_call(strike)).epsilon(1e-11));
}

TEST_CASE("digital values saturate at the tails and stay in [0, 1]") {
    const PricingEngine eng(bs_model(), kMkt, bs_contour());
    CHECK(eng.digital_value(-10.0) == doctest::Approx(1.0).epsilon(1e-12));
    const double far_otm = eng.digital_value(3.0);
    CHECK(far_otm >= 0.0);
    CHECK(far_otm <= 1e-8);
    const double put_from_parity = levy::put_price_via_parity(
        eng.call_value(eng.log_moneyness(120.0)), kMkt.S, 120.0, kMkt.r,
        kMkt.tau);
    const double d1 = (std::log(kMkt.S / 120.0) +
                       (kMkt.r + 0.5 * kSigma * kSigma) * kMkt.tau) /
                      (kSigma * std::sqrt(kMkt.tau));
    const double d2 = d1 - kSigma * std::sqrt(kMkt.tau);
    const double oracle_put =
        120.0 * std::exp(-kMkt.r * kMkt.tau) * levy::oracle::norm_cdf(-d2) -
        kMkt.S * levy::oracle::norm_cdf(-d1);
    CHECK(put_from_parity == doctest::Approx(oracle_put).epsilon(1e-10));
}

TEST_CASE("batched curve matches direct quadrature and the analytic curve") {
    const std::size_t n = 1 << 12;
    const PricingEngine eng(bs_model(), kMkt, bs_contour(1.5, n));
    const auto xs = levy::resonant_grid(eng.grid(), -0.35, 65);
    const auto payoff = levy::call_transform(100.0);
    const auto fft_curve = eng.curve_fft(payoff, xs);
    const auto direct_curve = eng.curve_direct(payoff, xs);
    REQUIRE(fft_curve.size() == 65);
    for (std::size_t m = 0; m < fft_curve.size(); ++m) {
        CHECK(fft_curve[m] ==
              doctest::Approx(direct_curve[m]).epsilon(1e-11).scale(kMkt.S));
        const double x = xs.x0 + static_cast<double>(m) * xs.delta;
        CHECK(fft_curve[m] ==
              doctest::Approx(oracle_call(eng.strike_for(x))).epsilon(1e-9));
    }

    const auto dig_fft = eng.curve_fft(levy::digital_transform(100.0), xs);
    const auto dig_direct = eng.curve_direct(levy::digital_transform(100.0), xs);
    for (std::size_t m = 0; m < dig_fft.size(); ++m) {
        CHECK(dig_fft[m] == doctest::Approx(dig_direct[m]).epsilon(1e-11));
        const double x = xs.x0 + static_cast<double>(m) * xs.delta;
        CHECK(dig_fft[m] ==
              doctest::Approx(levy::oracle::bs_tail_q(x, kMkt.tau, kSigma))
                  .epsilon(1e-9));
    }
}

TEST_CASE("serial reference path reproduces the parallel results bitwise") {
    PricingEngine par(bs_model(), kMkt, bs_contour(1.5, 1 << 13));
    PricingEngine ser(bs_model(), kMkt, bs_contour(1.5, 1 << 13));
    ser.set_serial(true);
    for (const double x : {-0.3, 0.0, 0.4}) {
        CHECK(par.call_value(x) == ser.call_value(x));
        const auto bp = par.base_bundle(x);
        const auto bs = ser.base_bundle(x);
        CHECK(bp.q == bs.q);
        CHECK(bp.q_dual == bs.q_dual);
        for (int n = 0; n <= 4; ++n) CHECK(bp.f[n] == bs.f[n]);
        CHECK(bp.psi_w == bs.psi_w);
        CHECK(bp.charm_w == bs.charm_w);
        CHECK(bp.theta_jump_w == bs.theta_jump_w);
    }
    const auto xs = levy::resonant_grid(par.grid(), -0.2, 16);
    const auto payoff = levy::call_transform(100.0);
    const auto a = par.curve_fft(payoff, xs);
    const auto b = ser.curve_fft(payoff, xs);
    for (std::size_t m = 0; m < a.size(); ++m) CHECK(a[m] == b[m]);
}

TEST_CASE("decay guard rejects routes the model cannot support") {
    const ModelSpec vg = ModelSpec::variance_gamma(0.2, 1.0, -0.15);
    const ContourSpec contour{1.5, 3200.0, 1 << 15, levy::Rule::simpson};
    const PricingEngine eng(vg, MarketState{100.0, 0.05, 1.0}, contour);
    CHECK_NOTHROW((void)eng.density(0.1, 0));
    CHECK_THROWS_AS((void)eng.density(0.1, 2), levy::DomainError);
    CHECK_NOTHROW((void)eng.call_value(0.0));
}

TEST_CASE("engine rejects invalid markets, contours and orders") {
    CHECK_THROWS_AS(PricingEngine(bs_model(), MarketState{-1.0, 0.05, 1.0},
                                  bs_contour()),
                    levy::ConfigError);
    CHECK_THROWS_AS(PricingEngine(bs_model(), MarketState{100.0, 0.05, 0.0},
                                  bs_contour()),
                    levy::ConfigError);
    const ModelSpec vg = ModelSpec::variance_gamma(0.2, 1.0, -0.15);
    CHECK_THROWS_AS(PricingEngine(vg, kMkt, bs_contour(12.0)),
                    levy::DomainError);

    const PricingEngine eng(bs_model(), kMkt, bs_contour(0.5));
    CHECK_THROWS_AS((void)eng.tail(0.0, Measure::dual), levy::DomainError);
    CHECK_THROWS_AS((void)eng.call_value(0.0), levy::DomainError);
    CHECK_THROWS_AS((void)eng.payoff_value(levy::call_transform(100.0)),
                    levy::DomainError);
    CHECK_NOTHROW((void)eng.payoff_value(levy::digital_transform(100.0)));
    CHECK_THROWS_AS((void)eng.density(0.0, 7), levy::ConfigError);
    CHECK_THROWS_AS((void)eng.log_moneyness(-5.0), levy::ConfigError);
}
