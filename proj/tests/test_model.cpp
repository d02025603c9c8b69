#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "levy/errors.hpp"
#include "levy/model.hpp"

using levy::cplx;
using levy::ModelSpec;

namespace {

const ModelSpec kBs = ModelSpec::black_scholes(0.1);
const ModelSpec kMerton = ModelSpec::merton(0.1, -0.005, 0.1, 1.0);
const ModelSpec kVg = ModelSpec::variance_gamma(0.2, 1.0, -0.15);

double midpoint(double lo, double hi, int n, const std::function<double(double)>& f) {
    const double dx = (hi - lo) / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += f(lo + (i + 0.5) * dx) * dx;
    return acc;
}

double merton_jump_density(double y, double mu, double s) {
    return std::exp(-0.5 * (y - mu) * (y - mu) / (s * s)) /
           (s * std::sqrt(2.0 * std::numbers::pi));
}

// variance gamma Lévy density (1/(nu |y|)) exp(a y - b |y|)
double vg_levy_density(double y, double rho, double nu, double theta) {
    const double a = theta / (rho * rho);
    const double b = std::sqrt(theta * theta + 2.0 * rho * rho / nu) / (rho * rho);
    return std::exp(a * y - b * std::abs(y)) / (nu * std::abs(y));
}

cplx fd_param_derivative(const std::string& kind, const std::string& param,
                         cplx z, double h) {
    auto make = [&](double bump) {
        if (kind == "bs") return ModelSpec::black_scholes(0.1 + (param == "sigma") * bump);
        if (kind == "merton")
            return ModelSpec::merton(0.1 + (param == "sigma") * bump,
                                     -0.005 + (param == "muj") * bump,
                                     0.1 + (param == "sigmaj") * bump,
                                     1.0 + (param == "lambda") * bump);
        return ModelSpec::variance_gamma(0.2 + (param == "rho") * bump,
                                         1.0 + (param == "nu") * bump,
                                         -0.15 + (param == "theta") * bump);
    };
    return (make(h).psi(z) - make(-h).psi(z)) / (2.0 * h);
}

} // namespace

TEST_CASE("all built-in models are martingale normalized") {
    for (const ModelSpec* m : {&kBs, &kMerton, &kVg}) {
        CHECK(std::abs(m->psi(cplx(0.0, -1.0))) < 1e-10);
        CHECK(std::abs(m->psi(cplx(0.0, 0.0))) < 1e-14);
    }
}

TEST_CASE("black-scholes exponent is the normal one") {
    const double s2 = 0.1 * 0.1;
    for (cplx z : {cplx(3.0, 0.0), cplx(-2.0, 1.5), cplx(10.0, -0.75)}) {
        const cplx expect = cplx(0.0, 1.0) * z * (-0.5 * s2) - z * z * (0.5 * s2);
        CHECK(std::abs(kBs.psi(z) - expect) < 1e-15);
    }
}

TEST_CASE("exponents are Hermitian and bounded on the real axis") {
    for (const ModelSpec* m : {&kBs, &kMerton, &kVg}) {
        for (double u : {0.3, 2.0, 17.0, 251.0}) {
            const cplx left = m->psi(cplx(-u, 0.5));
            const cplx right = std::conj(m->psi(cplx(u, 0.5)));
            CHECK(std::abs(left - right) < 1e-12 * (1.0 + std::abs(right)));
            // |E e^{iuX}| <= 1 for real u
            CHECK(m->psi(cplx(u, 0.0)).real() <= 1e-14);
        }
    }
}

TEST_CASE("second cumulants match the parameter values") {
    const double h = 1e-4;
    auto kappa2 = [&](const ModelSpec& m) {
        return -(m.psi(cplx(h, 0.0)) - 2.0 * m.psi(cplx(0.0, 0.0)) +
                 m.psi(cplx(-h, 0.0)))
                    .real() /
               (h * h);
    };
    CHECK(kappa2(kBs) == doctest::Approx(0.01).epsilon(1e-6));
    // sigma^2 + lambda (muj^2 + sigmaj^2)
    CHECK(kappa2(kMerton) == doctest::Approx(0.01 + 0.005 * 0.005 + 0.01).epsilon(1e-6));
    // rho^2 + nu theta^2
    CHECK(kappa2(kVg) == doctest::Approx(0.04 + 0.0225).epsilon(1e-6));
}

TEST_CASE("merton exponent equals the corrected closed form") {
    const double sg = 0.1, mu = -0.005, sj = 0.1, lam = 1.0;
    const double kappa = std::exp(mu + 0.5 * sj * sj) - 1.0;
    for (cplx z : {cplx(5.0, 1.5), cplx(-40.0, 0.5), cplx(2.0, -3.0)}) {
        const cplx iz = cplx(0.0, 1.0) * z;
        const cplx expect = -0.5 * sg * sg * z * z -
                            iz * (0.5 * sg * sg + lam * kappa) +
                            lam * (std::exp(iz * mu - z * z * (0.5 * sj * sj)) - 1.0);
        CHECK(std::abs(kMerton.psi(z) - expect) < 1e-13 * (1.0 + std::abs(expect)));
    }
}

TEST_CASE("variance gamma strip ends solve the log singularity") {
    CHECK(kVg.strip_lo() == doctest::Approx(-11.75390529679106).epsilon(1e-10));
    CHECK(kVg.strip_hi() == doctest::Approx(4.253905296791061).epsilon(1e-10));
    CHECK(kVg.strip_contains(-1.5));
    CHECK(!kVg.strip_contains(-12.0));
    CHECK(!kVg.strip_contains(5.0));
    CHECK(kBs.strip_contains(-1e9));
    // the log argument vanishes at both strip ends
    for (double beta : {kVg.strip_lo(), kVg.strip_hi()}) {
        const double arg = 1.0 + beta * (-0.15) - 0.5 * beta * beta * 0.04;
        CHECK(std::abs(arg) < 1e-12);
    }
}

TEST_CASE("parameter derivatives agree with finite differences") {
    const std::vector<cplx> zs = {cplx(3.0, 1.5), cplx(-12.0, 0.5), cplx(40.0, 2.0)};
    auto check = [&](const ModelSpec& m, const std::string& kind) {
        for (const auto& param : m.param_names()) {
            for (cplx z : zs) {
                const cplx analytic = m.psi_param_derivative(param, z);
                const cplx numeric = fd_param_derivative(kind, param, z, 1e-6);
                CHECK(std::abs(analytic - numeric) < 1e-5 * (1.0 + std::abs(analytic)));
            }
        }
    };
    check(kBs, "bs");
    check(kMerton, "merton");
    check(kVg, "vg");
    CHECK_THROWS_AS(kVg.psi_param_derivative("sigma", cplx(1.0, 0.0)),
                    levy::ConfigError);
    CHECK(kMerton.has_param("muj"));
    CHECK(!kMerton.has_param("rho"));
    CHECK(kMerton.param_value("lambda") == doctest::Approx(1.0));
}

TEST_CASE("levy measure moments match direct integration") {
    SUBCASE("merton") {
        const auto& m = kMerton.moments();
        auto nu_density = [](double y) { return merton_jump_density(y, -0.005, 0.1); };
        CHECK(m.small_square ==
              doctest::Approx(midpoint(-1.0, 1.0, 40000, [&](double y) {
                  return y * y * nu_density(y);
              })).epsilon(1e-8));
        const double tail_ref = midpoint(1.0, 2.5, 40000, [&](double y) {
            return std::exp(1.5 * y) * nu_density(y);
        }) + midpoint(-2.5, -1.0, 40000, [&](double y) {
            return std::exp(1.5 * y) * nu_density(y);
        });
        CHECK(m.exp_tail(1.5) == doctest::Approx(tail_ref).epsilon(1e-7));
        CHECK(m.large_mass == doctest::Approx(m.exp_tail(0.0)).epsilon(1e-12));
    }
    SUBCASE("variance gamma") {
        const auto& m = kVg.moments();
        auto k = [](double y) { return vg_levy_density(y, 0.2, 1.0, -0.15); };
        const double small_ref =
            midpoint(0.0, 1.0, 40000, [&](double y) { return y * y * k(y); }) +
            midpoint(-1.0, 0.0, 40000, [&](double y) { return y * y * k(y); });
        CHECK(m.small_square == doctest::Approx(small_ref).epsilon(1e-7));
        const double tail_ref = midpoint(1.0, 8.0, 80000, [&](double y) {
            return std::exp(1.5 * y) * k(y);
        }) + midpoint(-8.0, -1.0, 80000, [&](double y) {
            return std::exp(1.5 * y) * k(y);
        });
        CHECK(m.exp_tail(1.5) == doctest::Approx(tail_ref).epsilon(1e-6));
        CHECK(!std::isfinite(m.exp_tail(12.0)));
    }
}

TEST_CASE("growth bound dominates the exponent on contours") {
    for (const ModelSpec* m : {&kBs, &kMerton, &kVg}) {
        for (double u : {5.0, 50.0, 500.0}) {
            const cplx z(u, 1.5);
            const double bound = m->psi_growth_bound(1.5, std::abs(z));
            CHECK(std::abs(m->psi(-z)) <= bound * (1.0 + 1e-12));
        }
    }
    CHECK_THROWS_AS(kVg.psi_growth_bound(12.0, 10.0), levy::DomainError);
}

TEST_CASE("esscher dual shifts the exponent and reweights the measure") {
    for (const ModelSpec* m : {&kBs, &kMerton, &kVg}) {
        const ModelSpec dual = m->esscher_dual();
        // E e^{X_t} = 1 under the base measure means psi~(0) = 0
        CHECK(std::abs(dual.psi(cplx(0.0, 0.0))) < 1e-10);
        if (std::isinf(m->strip_lo())) {
            CHECK(std::isinf(dual.strip_lo()));
            CHECK(std::isinf(dual.strip_hi()));
        } else {
            CHECK(dual.strip_lo() == doctest::Approx(m->strip_lo() + 1.0));
            CHECK(dual.strip_hi() == doctest::Approx(m->strip_hi() + 1.0));
        }
        for (cplx z : {cplx(4.0, 0.5), cplx(-9.0, 2.0)})
            CHECK(std::abs(dual.psi(z) - m->psi(z - cplx(0.0, 1.0))) < 1e-14);
    }
    SUBCASE("dual moments equal e^y-weighted integrals") {
        const ModelSpec merton_dual = kMerton.esscher_dual();
        const auto& dm = merton_dual.moments();
        auto nu_density = [](double y) { return merton_jump_density(y, -0.005, 0.1); };
        CHECK(dm.small_square ==
              doctest::Approx(midpoint(-1.0, 1.0, 40000, [&](double y) {
                  return y * y * std::exp(y) * nu_density(y);
              })).epsilon(1e-8));
        const ModelSpec vg_dual = kVg.esscher_dual();
        const auto& dv = vg_dual.moments();
        auto k = [](double y) { return vg_levy_density(y, 0.2, 1.0, -0.15); };
        const double small_ref = midpoint(0.0, 1.0, 40000, [&](double y) {
            return y * y * std::exp(y) * k(y);
        }) + midpoint(-1.0, 0.0, 40000, [&](double y) {
            return y * y * std::exp(y) * k(y);
        });
        CHECK(dv.small_square == doctest::Approx(small_ref).epsilon(1e-7));
        const double tail_ref = midpoint(1.0, 8.0, 80000, [&](double y) {
            return std::exp(0.5 * y) * std::exp(y) * k(y);
        }) + midpoint(-8.0, -1.0, 80000, [&](double y) {
            return std::exp(0.5 * y) * std::exp(y) * k(y);
        });
        CHECK(dv.exp_tail(0.5) == doctest::Approx(tail_ref).epsilon(1e-6));
    }
}

TEST_CASE("invalid model parameters are rejected") {
    CHECK_THROWS_AS(ModelSpec::black_scholes(0.0), levy::ConfigError);
    CHECK_THROWS_AS(ModelSpec::merton(0.1, 0.0, -0.1, 1.0), levy::ConfigError);
    CHECK_THROWS_AS(ModelSpec::merton(0.1, 0.0, 0.1, 0.0), levy::ConfigError);
    CHECK_THROWS_AS(ModelSpec::variance_gamma(0.5, 1.0, 0.9), levy::ConfigError);
    CHECK_THROWS_AS(ModelSpec::custom("m", 0.1, nullptr, -1.0, 1.0, {}),
                    levy::ConfigError);
    CHECK_THROWS_AS(ModelSpec::custom("m", 0.1, [](cplx z) { return z; }, 2.0,
                                      1.0, {}),
                    levy::ConfigError);
    // custom exponent failing the martingale normalization
    CHECK_THROWS_AS(ModelSpec::custom("m", 0.1, [](cplx z) { return z * z; },
                                      -5.0, 5.0, {}),
                    levy::ConfigError);
}
