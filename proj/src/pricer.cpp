#include "levy/pricer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>
#include <numbers>

#include "levy/errors.hpp"
#include "levy/fft.hpp"
#include "levy/parallel.hpp"

namespace levy {

namespace {

constexpr std::size_t kChunk = 256; // phase recurrence re-anchor interval

constexpr double kTwoPi = 2.0 * std::numbers::pi;

cplx times_i(cplx z) { return {-z.imag(), z.real()}; }

} // namespace

template <class Body>
void PricingEngine::blocked_loop(Body&& body) const {
    const std::size_t n = grid_.size();
    const std::size_t nblocks = (n + par::kBlock - 1) / par::kBlock;
#ifdef _OPENMP
    if (!serial_ && nblocks > 1) {
#pragma omp parallel for schedule(static)
        for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
            const std::size_t lo = static_cast<std::size_t>(b) * par::kBlock;
            body(static_cast<std::size_t>(b), lo, std::min(n, lo + par::kBlock));
        }
        return;
    }
#endif
    for (std::size_t b = 0; b < nblocks; ++b) {
        const std::size_t lo = b * par::kBlock;
        body(b, lo, std::min(n, lo + par::kBlock));
    }
}

PricingEngine::PricingEngine(ModelSpec model, MarketState market,
                             ContourSpec contour)
    : model_(std::move(model)), market_(market), grid_(contour) {
    if (!(market_.S > 0.0) || !std::isfinite(market_.S))
        throw ConfigError("PricingEngine: spot must be positive and finite");
    if (!(market_.tau > 0.0) || !std::isfinite(market_.tau))
        throw ConfigError("PricingEngine: time to maturity must be positive and finite");
    if (!std::isfinite(market_.r))
        throw ConfigError("PricingEngine: rate must be finite");
    if (!model_.strip_contains(-grid_.v()))
        throw DomainError("PricingEngine: contour Im z = " +
                          std::to_string(grid_.v()) +
                          " lies outside the analyticity strip of '" +
                          model_.name() + "'");
    const std::size_t n = grid_.size();
    psi_.resize(n);
    exp_tpsi_.resize(n);
    par::parallel_for(n, [&](std::size_t k) {
        const cplx p = model_.psi(-grid_.node(k));
        psi_[k] = p;
        exp_tpsi_[k] = std::exp(market_.tau * p);
    });
}

double PricingEngine::log_moneyness(double strike) const {
    if (!(strike > 0.0) || !std::isfinite(strike))
        throw ConfigError("log_moneyness: strike must be positive and finite");
    return std::log(strike / market_.S) - market_.r * market_.tau;
}

double PricingEngine::strike_for(double x) const {
    return market_.S * std::exp(x + market_.r * market_.tau);
}

IntegralResult PricingEngine::line_integral(
    double x, const std::function<cplx(cplx, cplx)>& mult) const {
    const std::size_t n = grid_.size();
    const double h = grid_.h();
    const double u0 = -0.5 * grid_.spec().A;
    const cplx step = std::polar(1.0, h * x);
    const std::size_t nblocks = (n + par::kBlock - 1) / par::kBlock;
    std::vector<cplx> partial(nblocks);
    blocked_loop([&](std::size_t b, std::size_t lo, std::size_t hi) {
        cplx acc{};
        for (std::size_t c0 = lo; c0 < hi; c0 += kChunk) {
            const std::size_t c1 = std::min(hi, c0 + kChunk);
            cplx phase =
                std::polar(1.0, (u0 + static_cast<double>(c0) * h) * x);
            for (std::size_t k = c0; k < c1; ++k) {
                acc += grid_.weight(k) * phase * exp_tpsi_[k] *
                       mult(grid_.node(k), psi_[k]);
                phase *= step;
            }
        }
        partial[b] = acc;
    });
    cplx total{};
    for (const cplx& p : partial) total += p;
    const double c = h * std::exp(-grid_.v() * x) / kTwoPi;
    return {c * total.real(), c * std::abs(total.imag())};
}

void PricingEngine::require_decay(const std::function<cplx(cplx, cplx)>& mult,
                                  const std::string& what) const {
    const double v = grid_.v();
    const auto edge = [&](double radius) {
        double s = 0.0;
        for (const double sign : {1.0, -1.0}) {
            const cplx z(sign * radius, v);
            const cplx p = model_.psi(-z);
            s += std::abs(std::exp(market_.tau * p) * mult(z, p));
        }
        return radius * s;
    };
    const double a = grid_.spec().A;
    if (!(edge(0.5 * a) <= 0.9 * edge(0.25 * a)))
        throw DomainError(what +
                          ": integrand magnitude does not decay toward the "
                          "truncation boundary, so the truncated contour "
                          "integral is unreliable for this model");
}

PricingEngine::Bundle PricingEngine::base_bundle(double x) const {
    const std::size_t n = grid_.size();
    const double h = grid_.h();
    const double u0 = -0.5 * grid_.spec().A;
    const double r = market_.r;
    const double half_sig2 = 0.5 * model_.sigma() * model_.sigma();
    const cplx step = std::polar(1.0, h * x);
    using B = Bundle;
    constexpr std::size_t NACC = B::component_count;
    const std::size_t nblocks = (n + par::kBlock - 1) / par::kBlock;
    std::vector<std::array<cplx, NACC>> partial(nblocks);
    blocked_loop([&](std::size_t b, std::size_t lo, std::size_t hi) {
        std::array<cplx, NACC> a{};
        for (std::size_t c0 = lo; c0 < hi; c0 += kChunk) {
            const std::size_t c1 = std::min(hi, c0 + kChunk);
            cplx phase =
                std::polar(1.0, (u0 + static_cast<double>(c0) * h) * x);
            for (std::size_t k = c0; k < c1; ++k) {
                const cplx z = grid_.node(k);
                const cplx iz = times_i(z);
                const cplx one_p = 1.0 + iz;
                const cplx p = psi_[k];
                const cplx base = grid_.weight(k) * phase * exp_tpsi_[k];
                a[B::c_f0] += base;
                cplx t = base * iz;
                a[B::c_f1] += t;
                t *= iz;
                a[B::c_f2] += t;
                t *= iz;
                a[B::c_f3] += t;
                t *= iz;
                a[B::c_f4] += t;
                a[B::c_q] += base / iz;
                a[B::c_dual] += base / one_p;
                a[B::c_psi_w] += base * p;
                a[B::c_charm_w] += base * (r - p / one_p);
                a[B::c_theta_jump_w] +=
                    base * ((p + half_sig2 * (z * z - iz)) / (iz * one_p));
                phase *= step;
            }
        }
        partial[b] = a;
    });
    std::array<cplx, NACC> tot{};
    for (const auto& pa : partial)
        for (std::size_t i = 0; i < NACC; ++i) tot[i] += pa[i];
    const double c = h * std::exp(-grid_.v() * x) / kTwoPi;
    Bundle out;
    out.q = -c * tot[B::c_q].real();
    out.q_dual = -std::exp(x) * c * tot[B::c_dual].real();
    out.dual_valid = grid_.v() > 1.0;
    for (std::size_t i = 0; i < 5; ++i) out.f[i] = c * tot[B::c_f0 + i].real();
    out.psi_w = c * tot[B::c_psi_w].real();
    out.charm_w = c * tot[B::c_charm_w].real();
    out.theta_jump_w = c * tot[B::c_theta_jump_w].real();
    for (std::size_t i = 0; i < NACC; ++i) {
        out.residual[i] = c * std::abs(tot[i].imag());
        out.imag_residual = std::max(out.imag_residual, out.residual[i]);
    }
    return out;
}

double PricingEngine::tail(double x, Measure measure) const {
    const double v = grid_.v();
    std::function<cplx(cplx, cplx)> mult;
    if (measure == Measure::base) {
        if (!(v > 0.0))
            throw DomainError("tail: the base tail needs a contour with Im z > 0");
        mult = [](cplx z, cplx) { return -1.0 / times_i(z); };
    } else {
        if (!(v > 1.0))
            throw DomainError("tail: the dual tail needs a contour with Im z > 1");
        mult = [](cplx z, cplx) { return -1.0 / (1.0 + times_i(z)); };
    }
    require_decay(mult, "tail");
    double value = line_integral(x, mult).value;
    if (measure == Measure::dual) value *= std::exp(x);
    if (value < -1e-7 || value > 1.0 + 1e-7)
        throw DomainError("tail: probability " + std::to_string(value) +
                          " escaped [0, 1] beyond tolerance; the contour or "
                          "truncation width is unsound");
    return std::clamp(value, 0.0, 1.0);
}

double PricingEngine::density(double x, int n) const {
    if (n < 0 || n > 6)
        throw ConfigError("density: derivative order must be in 0..6");
    const auto mult = [n](cplx z, cplx) {
        const cplx iz = times_i(z);
        cplx m = 1.0;
        for (int i = 0; i < n; ++i) m *= iz;
        return m;
    };
    require_decay(mult, "density");
    return line_integral(x, mult).value;
}

double PricingEngine::call_value(double x) const {
    if (!(grid_.v() > 1.0))
        throw DomainError("call_value: the call transform is analytic for "
                          "Im z > 1; raise the contour");
    const auto mult = [](cplx z, cplx) {
        const cplx iz = times_i(z);
        return 1.0 / (iz * (1.0 + iz));
    };
    require_decay(mult, "call_value");
    const double value =
        market_.S * std::exp(x) * line_integral(x, mult).value;
    const double lower = std::max(0.0, market_.S * (1.0 - std::exp(x)));
    const double slack = 1e-7 * market_.S;
    if (value < lower - slack || value > market_.S + slack)
        throw DomainError("call_value: price " + std::to_string(value) +
                          " violates the no-arbitrage bounds beyond numerical "
                          "slack; the contour or truncation width is unsound");
    return value;
}

double PricingEngine::digital_value(double x) const {
    return tail(x, Measure::base);
}

double PricingEngine::payoff_value(const PayoffTransform& payoff) const {
    if (!payoff.shape)
        throw ConfigError("payoff_value: transform has no shape factor");
    const double v = grid_.v();
    if (!(v > payoff.strip_lo) || !(v < payoff.strip_hi))
        throw DomainError("payoff_value: contour Im z = " + std::to_string(v) +
                          " lies outside the transform's analyticity strip");
    const auto mult = [&payoff](cplx z, cplx) { return payoff.shape(z); };
    require_decay(mult, "payoff_value");
    const double x = log_moneyness(payoff.strike);
    const double disc =
        payoff.discounted ? std::exp(-market_.r * market_.tau) : 1.0;
    return disc * payoff.scale * line_integral(x, mult).value;
}

std::vector<double> PricingEngine::curve_fft(const PayoffTransform& payoff,
                                             const MoneynessGrid& xs) const {
    if (!payoff.shape || !payoff.scale_of)
        throw ConfigError("curve_fft: transform needs shape and per-strike scale");
    const double v = grid_.v();
    if (!(v > payoff.strip_lo) || !(v < payoff.strip_hi))
        throw DomainError("curve_fft: contour Im z = " + std::to_string(v) +
                          " lies outside the transform's analyticity strip");
    require_decay([&payoff](cplx z, cplx) { return payoff.shape(z); },
                  "curve_fft");
    const std::size_t n = grid_.size();
    std::vector<cplx> samples(n);
    const auto fill = [&](std::size_t k) {
        samples[k] = payoff.shape(grid_.node(k)) * exp_tpsi_[k];
    };
    if (serial_) {
        for (std::size_t k = 0; k < n; ++k) fill(k);
    } else {
        par::parallel_for(n, fill);
    }
    const std::vector<cplx> f = batch_evaluate(grid_, samples, xs, serial_);
    const double disc =
        payoff.discounted ? std::exp(-market_.r * market_.tau) : 1.0;
    std::vector<double> out(xs.count);
    for (std::size_t m = 0; m < xs.count; ++m) {
        const double x = xs.x0 + static_cast<double>(m) * xs.delta;
        out[m] = disc * payoff.scale_of(strike_for(x)) * f[m].real() / kTwoPi;
    }
    return out;
}

std::vector<double> PricingEngine::curve_direct(const PayoffTransform& payoff,
                                                const MoneynessGrid& xs) const {
    if (!payoff.shape || !payoff.scale_of)
        throw ConfigError("curve_direct: transform needs shape and per-strike scale");
    const double v = grid_.v();
    if (!(v > payoff.strip_lo) || !(v < payoff.strip_hi))
        throw DomainError("curve_direct: contour Im z = " + std::to_string(v) +
                          " lies outside the transform's analyticity strip");
    const auto mult = [&payoff](cplx z, cplx) { return payoff.shape(z); };
    require_decay(mult, "curve_direct");
    const double disc =
        payoff.discounted ? std::exp(-market_.r * market_.tau) : 1.0;
    std::vector<double> out(xs.count);
    for (std::size_t m = 0; m < xs.count; ++m) {
        const double x = xs.x0 + static_cast<double>(m) * xs.delta;
        out[m] = disc * payoff.scale_of(strike_for(x)) *
                 line_integral(x, mult).value;
    }
    return out;
}

double price_european(const ModelSpec& model, const MarketState& market,
                      const PayoffTransform& payoff, const ContourSpec& contour) {
    PricingEngine engine(model, market, contour);
    return engine.payoff_value(payoff);
}

double call_price(const ModelSpec& model, const MarketState& market,
                  double strike, const ContourSpec& contour) {
    PricingEngine engine(model, market, contour);
    return engine.call_value(engine.log_moneyness(strike));
}

double tail_prob(const ModelSpec& model, double x, double tau,
                 const ContourSpec& contour, Measure measure) {
    PricingEngine engine(model, MarketState{1.0, 0.0, tau}, contour);
    return engine.tail(x, measure);
}

double density(const ModelSpec& model, double x, double tau,
               const ContourSpec& contour, int n) {
    PricingEngine engine(model, MarketState{1.0, 0.0, tau}, contour);
    return engine.density(x, n);
}

double generalized_bs(const ModelSpec& model, const MarketState& market,
                      double strike, const ContourSpec& contour) {
    PricingEngine engine(model, market, contour);
    const double x = engine.log_moneyness(strike);
    return market.S *
           (engine.tail(x, Measure::dual) - std::exp(x) * engine.tail(x, Measure::base));
}

} // namespace levy
