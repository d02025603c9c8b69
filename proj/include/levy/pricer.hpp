#pragma once

#include <functional>
#include <string>
#include <vector>

#include "levy/contour.hpp"
#include "levy/model.hpp"
#include "levy/transforms.hpp"
#include "levy/types.hpp"

namespace levy {

struct MarketState {
    double S = 0.0;
    double r = 0.0;
    double tau = 0.0;
};

struct IntegralResult {
    double value = 0.0;
    double imag_residual = 0.0;
};

enum class Measure { base, dual };

/** Evaluates contour integrals of e^{izx} e^{tau psi(-z)} mult(z) against one
 *  set of exponent samples shared by every price, tail, density and Greek on
 *  the same (model, tau, contour) triple. All reductions are deterministic
 *  for any thread count; set_serial routes them through the serial reference
 *  implementation with identical arithmetic. */
class PricingEngine {
public:
    PricingEngine(ModelSpec model, MarketState market, ContourSpec contour);

    const ModelSpec& model() const { return model_; }
    const MarketState& market() const { return market_; }
    const QuadratureGrid& grid() const { return grid_; }

    void set_serial(bool serial) { serial_ = serial; }
    bool serial() const { return serial_; }

    double log_moneyness(double strike) const;
    double strike_for(double x) const;

    /** (1/2pi) integral of e^{izx} e^{tau psi(-z)} mult(z, psi(-z)) dz. */
    IntegralResult line_integral(double x,
                                 const std::function<cplx(cplx, cplx)>& mult) const;

    /** Throws when |z g(z)| at |Re z| = A/2 exceeds 0.9 times its value at
     *  A/4, i.e. the truncated integrand has not started decaying; g combines
     *  the exponent sample with the multiplier. */
    void require_decay(const std::function<cplx(cplx, cplx)>& mult,
                       const std::string& what) const;

    /** Everything the closed-form Greek routes need at one x, from a single
     *  fused pass: tails, density derivatives and the exponent-weighted
     *  integrals. Components are raw sums; consumers must check decay of the
     *  pieces they use (see require_decay) and judge accuracy by the matching
     *  residual entries, not by the all-component imag_residual. */
    struct Bundle {
        enum Component : std::size_t {
            c_q, c_dual, c_f0, c_f1, c_f2, c_f3, c_f4,
            c_psi_w, c_charm_w, c_theta_jump_w, component_count
        };
        double q = 0.0;          // Q(X_tau > x)
        double q_dual = 0.0;     // E[e^X 1{X > x}]; valid only when v > 1
        double f[5] = {0.0, 0.0, 0.0, 0.0, 0.0}; // density derivatives at x
        double psi_w = 0.0;      // (1/2pi) int e^{izx} e^{tau psi} psi(-z) dz
        double charm_w = 0.0;    // ... [r - psi(-z)/(1+iz)] dz
        double theta_jump_w = 0.0; // ... psi_jump(-z)/(iz(1+iz)) dz
        double residual[component_count] = {}; // imaginary residual, one per component
        double imag_residual = 0.0;            // max over all components
        bool dual_valid = false;
    };
    Bundle base_bundle(double x) const;

    /** Tail probabilities, clamped to [0,1] after a tolerance check.
     *  The base measure needs v > 0, the dual one v > 1. */
    double tail(double x, Measure measure) const;

    /** n-th derivative of the density of X_tau, n = 0..6. */
    double density(double x, int n) const;

    /** Discounted call value at log-moneyness x = ln(K/S) - r tau. */
    double call_value(double x) const;

    /** Undiscounted digital (exercise probability). */
    double digital_value(double x) const;

    /** Values of a separable payoff on a resonant moneyness grid, one FFT. */
    std::vector<double> curve_fft(const PayoffTransform& payoff,
                                  const MoneynessGrid& xs) const;

    /** Same values point by point, for cross-checking the FFT path. */
    std::vector<double> curve_direct(const PayoffTransform& payoff,
                                     const MoneynessGrid& xs) const;

    /** Value of the payoff at its own strike (direct quadrature). */
    double payoff_value(const PayoffTransform& payoff) const;

    cplx exp_tpsi(std::size_t k) const { return exp_tpsi_[k]; }
    cplx psi_at(std::size_t k) const { return psi_[k]; }

private:
    ModelSpec model_;
    MarketState market_;
    QuadratureGrid grid_;
    std::vector<cplx> psi_;      // psi(-z_k)
    std::vector<cplx> exp_tpsi_; // e^{tau psi(-z_k)}
    bool serial_ = false;

    template <class Body>
    void blocked_loop(Body&& body) const; // deterministic block partials
};

/** Contour-integral value of an arbitrary separable payoff transform. */
double price_european(const ModelSpec& model, const MarketState& market,
                      const PayoffTransform& payoff, const ContourSpec& contour);

double call_price(const ModelSpec& model, const MarketState& market,
                  double strike, const ContourSpec& contour);

/** Q(X_tau > x) or the dual tail E[e^X 1{X > x}] for the given model. */
double tail_prob(const ModelSpec& model, double x, double tau,
                 const ContourSpec& contour, Measure measure);

double density(const ModelSpec& model, double x, double tau,
               const ContourSpec& contour, int n = 0);

/** Call value assembled from the two tails: S (Q~ - e^x Q). */
double generalized_bs(const ModelSpec& model, const MarketState& market,
                      double strike, const ContourSpec& contour);

} // namespace levy
