#pragma once

#include <functional>
#include <string>

#include "levy/types.hpp"

namespace levy {

/** Fourier transform of a payoff in log-price, evaluated on a horizontal
 *  contour. Transforms are separable: what(z) = scale * e^{i z log_strike} *
 *  shape(z), which lets batch evaluation pull the strike phase into the FFT.
 *
 *  `discounted` records the quoting convention: call values carry e^{-r tau},
 *  digital values are quoted as undiscounted exercise probabilities. */
struct PayoffTransform {
    std::string name;
    double strike = 0.0;
    double strip_lo = 0.0;      // admissible contour shifts Im z = v (open)
    double strip_hi = 0.0;
    bool discounted = true;
    double scale = 1.0;
    double log_strike = 0.0;
    std::function<cplx(cplx)> shape;
    std::function<double(double)> scale_of; // scale as a function of strike

    cplx what(cplx z) const {
        return scale * std::exp(cplx(0.0, 1.0) * z * log_strike) * shape(z);
    }
};

/** Call payoff (e^s - K)^+: what(z) = K e^{i z ln K} / (iz (1 + iz)),
 *  analytic for Im z > 1. */
PayoffTransform call_transform(double strike);

/** Digital payoff 1{e^s > K}: what(z) = -e^{i z ln K} / (iz), analytic for
 *  Im z > 0. Values are quoted undiscounted (exercise probabilities). */
PayoffTransform digital_transform(double strike);

/** European put from the call with the same strike. */
double put_price_via_parity(double call, double S, double K, double r, double tau);

} // namespace levy
