#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "levy/types.hpp"

namespace levy {

/** Summary statistics of the Lévy measure entering the exponent growth bound:
 *  the small-jump second moment and the exponential tail mass beyond |y| = 1. */
struct LevyMeasureMoments {
    double small_square = 0.0;              // integral of y^2 nu(dy) over |y| <= 1
    double large_mass = 0.0;                 // nu(|y| > 1)
    std::function<double(double)> exp_tail;  // v -> integral of e^{vy} nu(dy) over |y| > 1
};

/** Risk-neutral exponential Lévy model of the log price: S_t = S_0 e^{rt + X_t}
 *  with E e^{iz X_t} = e^{t psi(z)} and the martingale normalization psi(-i) = 0.
 *
 *  Built-in kinds: Black-Scholes (diffusion only), Merton (diffusion plus
 *  Gaussian jumps with intensity lambda, mean muj, stddev sigmaj) and variance
 *  gamma (parameters rho, nu, theta; no diffusion). Custom models supply psi
 *  and its analyticity strip directly.
 */
class ModelSpec {
public:
    enum class Kind { black_scholes, merton, variance_gamma, custom };

    static ModelSpec black_scholes(double sigma);
    static ModelSpec merton(double sigma, double muj, double sigmaj, double lambda);
    static ModelSpec variance_gamma(double rho, double nu, double theta);

    /** Wraps a user-supplied exponent. `strip_lo < strip_hi` bound Im z for
     *  which psi is analytic; param_derivatives may be empty. Set
     *  require_martingale = false for exponents that are deliberately not
     *  normalized (measure changes, experiments). */
    static ModelSpec custom(std::string name, double sigma,
                            std::function<cplx(cplx)> psi, double strip_lo,
                            double strip_hi, LevyMeasureMoments moments,
                            std::map<std::string, std::function<cplx(cplx)>>
                                param_derivatives = {},
                            bool require_martingale = true);

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    double sigma() const { return sigma_; }
    bool has_diffusion() const { return sigma_ > 0.0; }

    /** Characteristic exponent at z, Im z inside the strip. */
    cplx psi(cplx z) const;

    /** Analyticity strip of psi: Im z in (strip_lo, strip_hi). */
    double strip_lo() const { return strip_lo_; }
    double strip_hi() const { return strip_hi_; }
    bool strip_contains(double im_z) const {
        return im_z > strip_lo_ && im_z < strip_hi_;
    }

    /** Model parameters with analytic d psi / d parameter. */
    std::vector<std::string> param_names() const;
    bool has_param(const std::string& param) const;
    double param_value(const std::string& param) const;

    /** d psi(z) / d parameter, analytic in z on the same strip. */
    cplx psi_param_derivative(const std::string& param, cplx z) const;

    const LevyMeasureMoments& moments() const { return moments_; }

    /** Upper bound for |psi(-z)| on the contour Im z = v, |z| = abs_z:
     *  (|z|^2 + |z|) (e^v m2 / 2 + sigma^2 / 2) + 2 (exp_tail(v) + large_mass).
     *  Requires the exponential tail to be finite at v. */
    double psi_growth_bound(double contour_v, double abs_z) const;

    /** Model under the spot-measure change (density e^{X_t} against the base
     *  measure): psi~(z) = psi(z - i), strip shifted up by one, Lévy measure
     *  reweighted by e^y. Not martingale-normalized. */
    ModelSpec esscher_dual() const;

private:
    ModelSpec() = default;

    Kind kind_ = Kind::custom;
    std::string name_;
    double sigma_ = 0.0;
    // Merton parameters; kappa = E e^{jump} - 1
    double muj_ = 0.0, sigmaj_ = 0.0, lambda_ = 0.0, kappa_ = 0.0;
    // variance gamma parameters; c = 1 - theta nu - rho^2 nu / 2
    double rho_ = 0.0, nu_ = 0.0, theta_ = 0.0, vg_c_ = 0.0;
    std::function<cplx(cplx)> custom_psi_;
    std::map<std::string, std::function<cplx(cplx)>> custom_dpsi_;
    double strip_lo_ = 0.0, strip_hi_ = 0.0;
    LevyMeasureMoments moments_;

    void check_martingale() const;
};

} // namespace levy
