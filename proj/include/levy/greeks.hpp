#pragma once

#include <functional>
#include <string>
#include <vector>

#include "levy/pricer.hpp"

namespace levy {

struct KernelContext {
    double S = 0.0;
    double r = 0.0;
    double tau = 0.0;
    double sigma = 0.0; // diffusion volatility; zero for pure-jump models
};

/** Reweighting of the call integrand: the Greek equals
 *  S e^x (1/2pi) int e^{izx} e^{tau psi(-z)} mult(z) / (iz(1+iz)) dz,
 *  so every sensitivity reuses the call's exponent samples. */
struct GreekKernel {
    std::string name;
    bool needs_sigma = false; // multiplier references the diffusion volatility
    std::function<cplx(cplx z, cplx psi_mz, const KernelContext&)> mult;
};

/** All built-in call sensitivities, in reporting order: delta, rho, vega,
 *  theta, gamma, vanna, vomma, charm, veta, vera, color, speed, ultima,
 *  zomma. Maturity-direction Greeks (theta, charm, veta, color) are
 *  d/dtau derivatives with the strike held fixed. */
const std::vector<GreekKernel>& greek_kernels();
const GreekKernel& greek_kernel(const std::string& name);

enum class GreekRoute { kernel, closed };

struct GreekValue {
    double value = 0.0;
    double imag_residual = 0.0;
};

/** One contour integral with the reweighted call integrand. */
GreekValue kernel_greek(const PricingEngine& engine, double strike,
                        const std::string& name);

/** The same sensitivity assembled from tails, density derivatives and
 *  exponent-weighted integrals (the engine's fused bundle). Kept as an
 *  independent route to cross-check the kernels. */
GreekValue closed_greek(const PricingEngine& engine, double strike,
                        const std::string& name);

double call_greek(const PricingEngine& engine, double strike,
                  const std::string& name, GreekRoute route);

/** Closed-route assembly from a precomputed bundle. Performs no decay
 *  checks; callers batching over moneyness should run require_closed_decay
 *  once per name beforehand. A non-null used_residual receives the largest
 *  imaginary residual among the bundle components the name reads. */
double closed_from_bundle(const PricingEngine& engine,
                          const PricingEngine::Bundle& bundle, double x,
                          const std::string& name,
                          double* used_residual = nullptr);

/** Decay checks for every contour integral the closed route of name uses. */
void require_closed_decay(const PricingEngine& engine, const std::string& name);

/** dC / d parameter for any model parameter with an analytic exponent
 *  derivative (e.g. muj, sigmaj, lambda, rho, nu, theta_drift). */
double param_sensitivity(const PricingEngine& engine, double strike,
                         const std::string& param);

/** dC / d lambda for the jump-diffusion model, built directly from the
 *  Gaussian jump transform rather than the model's registered derivative;
 *  cross-checks param_sensitivity("lambda"). */
double jump_intensity_sensitivity(const PricingEngine& engine, double strike);

/** Undiscounted digital value with its spot and volatility sensitivities.
 *  vega_defined is false for pure-jump models. */
struct DigitalGreeks {
    double value = 0.0;
    double delta = 0.0;
    double gamma = 0.0;
    double vega = 0.0;
    bool vega_defined = false;
};

DigitalGreeks digital_greeks(const PricingEngine& engine, double strike);

/** Maturity-direction Greeks (theta, charm, veta, color) recomputed as a
 *  diffusion part plus an explicit average over jump sizes; needs a
 *  finite-intensity jump model. Third route for cross-checking. */
double decomposed_greek(const PricingEngine& engine, double strike,
                        const std::string& name);

struct GreekRow {
    std::string name;
    double kernel_value = 0.0;
    double closed_value = 0.0;
    double discrepancy = 0.0;
    double imag_residual = 0.0;
    bool kernel_ok = false;
    bool closed_ok = false;
    std::string note;
};

/** Evaluates each requested name through both routes; route failures are
 *  recorded in the note instead of aborting the report. Names may also be
 *  "param:<p>" for model-parameter sensitivities. */
std::vector<GreekRow> greek_report(const PricingEngine& engine, double strike,
                                   const std::vector<std::string>& names);

} // namespace levy
