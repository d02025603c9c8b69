#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace levy::oracle {

/** Standard normal pdf and cdf (cdf via erfc for full double accuracy). */
double norm_pdf(double x);
double norm_cdf(double x);

/** Analytic Black-Scholes values for a European call with spot S, strike K,
 *  rate r, maturity tau, volatility sigma (no dividend yield).
 *
 *  Recognized names: price, delta, rho, vega, theta, gamma, vanna, vomma,
 *  charm, veta, vera, color, speed, ultima, zomma, and the digital family
 *  digital, digital_delta, digital_gamma, digital_vega.
 *
 *  Conventions: theta, charm, veta, color are maturity derivatives (d/dtau,
 *  strike held fixed); digital values are undiscounted exercise
 *  probabilities Q(X_tau > x) under the martingale measure.
 */
double bs_value(const std::string& name, double S, double K, double r,
                double tau, double sigma);

/** Lists the names accepted by bs_value, in reporting order. */
const std::vector<std::string>& bs_names();

/** Tail probabilities of the log-price increment X_tau at log-moneyness
 *  x = ln(K/S) - r*tau: Q(X_tau > x) and the dual-measure (spot-weighted)
 *  tail E[e^{X_tau} 1{X_tau > x}]. */
double bs_tail_q(double x, double tau, double sigma);
double bs_tail_dual(double x, double tau, double sigma);

/** n-th derivative of the density of X_tau ~ N(-sigma^2 tau/2, sigma^2 tau),
 *  n = 0..8, via the Hermite recursion. */
double bs_density(double x, double tau, double sigma, int n = 0);

/** Central finite difference of f at `at`.
 *  order 1: (f(x+h) - f(x-h)) / 2h
 *  order 2: (f(x+h) - 2 f(x) + f(x-h)) / h^2
 *  order 3: (f(x+2h) - 2 f(x+h) + 2 f(x-h) - f(x-2h)) / 2h^3
 *  h <= 0 selects the default step 1e-4*max(1,|at|) (1e-3 for order 3). */
double finite_difference(const std::function<double(double)>& f, double at,
                         int order, double h = 0.0);

/** Largest absolute deviation between two curves sampled on a common grid. */
struct CurveError {
    double linf = 0.0;     // max_i |a[i] - b[i]|
    double location = 0.0; // grid point where the max occurs
    std::size_t index = 0;
};

CurveError linf_error(const std::vector<double>& a, const std::vector<double>& b,
                      const std::vector<double>& xs);

} // namespace levy::oracle
