#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "levy/contour.hpp"
#include "levy/errors.hpp"
#include "levy/greeks.hpp"
#include "levy/model.hpp"
#include "levy/oracle.hpp"
#include "levy/pricer.hpp"

using levy::ContourSpec;
using levy::GreekRoute;
using levy::MarketState;
using levy::Measure;
using levy::ModelSpec;
using levy::PricingEngine;

namespace {

const MarketState kMkt{100.0, 0.05, 0.75};
constexpr double kSigma = 0.25;

const std::vector<std::string> kNames{
    "delta", "rho",  "vega",  "theta", "gamma", "vanna", "vomma",
    "charm", "veta", "vera",  "color", "speed", "ultima", "zomma"};

PricingEngine bs_engine(std::size_t n = 1 << 13) {
    return PricingEngine(ModelSpec::black_scholes(kSigma), kMkt,
                         ContourSpec{1.5, 200.0, n, levy::Rule::simpson});
}

PricingEngine merton_engine() {
    return PricingEngine(ModelSpec::merton(0.1, -0.005, 0.1, 1.0),
                         MarketState{1.0, 0.05, 1.0},
                         ContourSpec{1.5, 200.0, 1 << 13, levy::Rule::simpson});
}

PricingEngine vg_engine() {
    return PricingEngine(ModelSpec::variance_gamma(0.2, 1.0, -0.15),
                         MarketState{100.0, 0.05, 1.0},
                         ContourSpec{1.5, 3200.0, 1 << 15, levy::Rule::simpson});
}

} // namespace

TEST_CASE("kernel Greeks match the analytic diffusion values") {
    const PricingEngine eng = bs_engine();
    for (const double strike : {85.0, 100.0, 120.0}) {
        for (const auto& name : kNames) {
            const double want = levy::oracle::bs_value(name, kMkt.S, strike,
                                                       kMkt.r, kMkt.tau, kSigma);
            const auto got = levy::kernel_greek(eng, strike, name);
            INFO(name, " at K=", strike);
            CHECK(got.value ==
                  doctest::Approx(want).epsilon(1e-9).scale(1.0 + std::fabs(want)));
            CHECK(got.imag_residual <= 1e-8 * (1.0 + std::fabs(want)));
        }
    }
}

TEST_CASE("closed-route Greeks match the analytic diffusion values") {
    const PricingEngine eng = bs_engine();
    for (const double strike : {85.0, 100.0, 120.0}) {
        for (const auto& name : kNames) {
            const double want = levy::oracle::bs_value(name, kMkt.S, strike,
                                                       kMkt.r, kMkt.tau, kSigma);
            const auto got = levy::closed_greek(eng, strike, name);
            INFO(name, " at K=", strike);
            CHECK(got.value ==
                  doctest::Approx(want).epsilon(1e-9).scale(1.0 + std::fabs(want)));
        }
    }
    CHECK(levy::call_greek(eng, 100.0, "delta", GreekRoute::kernel) ==
          doctest::Approx(levy::call_greek(eng, 100.0, "delta",
                                           GreekRoute::closed))
              .epsilon(1e-11));
}

TEST_CASE("kernel and closed routes agree on the jump-diffusion model") {
    const PricingEngine eng = merton_engine();
    for (const auto& name : kNames) {
        const auto kv = levy::kernel_greek(eng, 1.0, name);
        const auto cv = levy::closed_greek(eng, 1.0, name);
        INFO(name);
        CHECK(kv.value ==
              doctest::Approx(cv.value).epsilon(1e-10).scale(1.0 + std::fabs(cv.value)));
    }
}

TEST_CASE("jump-size decomposition agrees with the other routes") {
    const PricingEngine eng = merton_engine();
    for (const std::string name : {"theta", "charm", "veta", "color"}) {
        const double via_decomposition = levy::decomposed_greek(eng, 1.0, name);
        const double via_kernel = levy::kernel_greek(eng, 1.0, name).value;
        INFO(name);
        CHECK(via_decomposition ==
              doctest::Approx(via_kernel)
                  .epsilon(1e-8)
                  .scale(1.0 + std::fabs(via_kernel)));
    }
    CHECK_THROWS_AS(
        (void)levy::decomposed_greek(bs_engine(), 100.0, "theta"),
        levy::ConfigError);
    CHECK_THROWS_AS((void)levy::decomposed_greek(eng, 1.0, "delta"),
                    levy::ConfigError);
}

TEST_CASE("parameter sensitivities match finite differences of the price") {
    const MarketState mkt{1.0, 0.05, 1.0};
    const ContourSpec contour{1.5, 200.0, 1 << 13, levy::Rule::simpson};
    const PricingEngine eng(ModelSpec::merton(0.1, -0.005, 0.1, 1.0), mkt,
                            contour);
    const auto rebuild = [&](const std::string& param, double bump) {
        double sigma = 0.1, muj = -0.005, sigmaj = 0.1, lambda = 1.0;
        if (param == "sigma") sigma += bump;
        if (param == "muj") muj += bump;
        if (param == "sigmaj") sigmaj += bump;
        if (param == "lambda") lambda += bump;
        return levy::call_price(ModelSpec::merton(sigma, muj, sigmaj, lambda),
                                mkt, 1.0, contour);
    };
    for (const std::string param : {"sigma", "muj", "sigmaj", "lambda"}) {
        const double got = levy::param_sensitivity(eng, 1.0, param);
        const double fd = levy::oracle::finite_difference(
            [&](double b) { return rebuild(param, b); }, 0.0, 1, 1e-4);
        INFO(param);
        CHECK(got == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
    }
    CHECK_THROWS_AS((void)levy::param_sensitivity(eng, 1.0, "nu"),
                    levy::ConfigError);
}

TEST_CASE("independent jump-intensity route matches the registered derivative") {
    const PricingEngine eng = merton_engine();
    CHECK(levy::jump_intensity_sensitivity(eng, 1.0) ==
          doctest::Approx(levy::param_sensitivity(eng, 1.0, "lambda"))
              .epsilon(1e-12));
    CHECK_THROWS_AS((void)levy::jump_intensity_sensitivity(bs_engine(), 100.0),
                    levy::ConfigError);
}

TEST_CASE("pure-jump parameter sensitivities match finite differences") {
    const MarketState mkt{100.0, 0.05, 1.0};
    const ContourSpec contour{1.5, 3200.0, 1 << 15, levy::Rule::simpson};
    const PricingEngine eng(ModelSpec::variance_gamma(0.2, 1.0, -0.15), mkt,
                            contour);
    const auto rebuild = [&](const std::string& param, double bump) {
        double rho = 0.2, nu = 1.0, theta = -0.15;
        if (param == "rho") rho += bump;
        if (param == "nu") nu += bump;
        if (param == "theta") theta += bump;
        return levy::call_price(ModelSpec::variance_gamma(rho, nu, theta), mkt,
                                100.0, contour);
    };
    for (const std::string param : {"rho", "nu", "theta"}) {
        const double got = levy::param_sensitivity(eng, 100.0, param);
        const double fd = levy::oracle::finite_difference(
            [&](double b) { return rebuild(param, b); }, 0.0, 1, 1e-4);
        INFO(param);
        CHECK(got == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
    }
}

TEST_CASE("volatility derivative of the density follows the heat identity") {
    // d f^(n) / d sigma = tau sigma (f^(n+1) + f^(n+2))
    const double x = -0.12;
    const PricingEngine eng = bs_engine();
    for (int n = 0; n <= 2; ++n) {
        const double fd = levy::oracle::finite_difference(
            [&](double s) {
                const PricingEngine e(
                    ModelSpec::black_scholes(s), kMkt,
                    ContourSpec{1.5, 200.0, 1 << 13, levy::Rule::simpson});
                return e.density(x, n);
            },
            kSigma, 1, 1e-5);
        const double identity = kMkt.tau * kSigma *
                                (eng.density(x, n + 1) + eng.density(x, n + 2));
        CHECK(identity == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
    }
}

TEST_CASE("digital Greeks match the analytic digital family") {
    const ContourSpec contour{0.5, 200.0, 1 << 13, levy::Rule::simpson};
    const PricingEngine eng(ModelSpec::black_scholes(kSigma), kMkt, contour);
    for (const double strike : {90.0, 100.0, 115.0}) {
        const auto d = levy::digital_greeks(eng, strike);
        REQUIRE(d.vega_defined);
        CHECK(d.value == doctest::Approx(levy::oracle::bs_value(
                             "digital", kMkt.S, strike, kMkt.r, kMkt.tau,
                             kSigma)).epsilon(1e-10));
        CHECK(d.delta == doctest::Approx(levy::oracle::bs_value(
                             "digital_delta", kMkt.S, strike, kMkt.r, kMkt.tau,
                             kSigma)).epsilon(1e-10));
        CHECK(d.gamma == doctest::Approx(levy::oracle::bs_value(
                             "digital_gamma", kMkt.S, strike, kMkt.r, kMkt.tau,
                             kSigma)).epsilon(1e-9).scale(1e-3));
        CHECK(d.vega == doctest::Approx(levy::oracle::bs_value(
                            "digital_vega", kMkt.S, strike, kMkt.r, kMkt.tau,
                            kSigma)).epsilon(1e-9));
    }
}

TEST_CASE("routes a model cannot support fail loudly") {
    const PricingEngine vg = vg_engine();
    // no diffusion volatility to differentiate in
    CHECK_THROWS_AS((void)levy::kernel_greek(vg, 100.0, "vega"),
                    levy::DomainError);
    CHECK_THROWS_AS((void)levy::closed_greek(vg, 100.0, "vomma"),
                    levy::DomainError);
    // density derivative behind the closed route diverges at tau = nu, and
    // the kernel reweighting decays only like r/|z|; both must refuse
    CHECK_THROWS_AS((void)levy::closed_greek(vg, 100.0, "color"),
                    levy::DomainError);
    CHECK_THROWS_AS((void)levy::kernel_greek(vg, 100.0, "color"),
                    levy::DomainError);
    // maturity-direction Greeks with stronger payoff damping still work
    CHECK_NOTHROW((void)levy::kernel_greek(vg, 100.0, "theta"));
    CHECK_NOTHROW((void)levy::closed_greek(vg, 100.0, "charm"));
    CHECK_NOTHROW((void)levy::closed_greek(vg, 100.0, "delta"));
    CHECK_NOTHROW((void)levy::closed_greek(vg, 100.0, "gamma"));
    CHECK_THROWS_AS((void)levy::kernel_greek(vg, 100.0, "flub"),
                    levy::ConfigError);
}

TEST_CASE("greek report records both routes and failures per name") {
    const PricingEngine eng = merton_engine();
    auto names = kNames;
    names.push_back("param:lambda");
    names.push_back("param:muj");
    const auto rows = levy::greek_report(eng, 1.0, names);
    REQUIRE(rows.size() == names.size());
    for (std::size_t i = 0; i < kNames.size(); ++i) {
        INFO(rows[i].name);
        CHECK(rows[i].kernel_ok);
        CHECK(rows[i].closed_ok);
        CHECK(rows[i].discrepancy <=
              1e-9 * (1.0 + std::fabs(rows[i].closed_value)));
    }
    const auto& lambda_row = rows[kNames.size()];
    CHECK(lambda_row.kernel_ok);
    CHECK(lambda_row.closed_ok);
    CHECK(lambda_row.discrepancy <= 1e-12);
    const auto& muj_row = rows[kNames.size() + 1];
    CHECK(muj_row.kernel_ok);
    CHECK_FALSE(muj_row.closed_ok);
    CHECK(!muj_row.note.empty());

    const auto vg_rows =
        levy::greek_report(vg_engine(), 100.0, {"vega", "gamma"});
    CHECK_FALSE(vg_rows[0].kernel_ok);
    CHECK_FALSE(vg_rows[0].closed_ok);
    CHECK(!vg_rows[0].note.empty());
    CHECK(vg_rows[1].kernel_ok);
    CHECK(vg_rows[1].closed_ok);
}
