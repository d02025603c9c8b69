#include "levy/transforms.hpp"

#include <cmath>
#include <limits>

#include "levy/errors.hpp"

namespace levy {

PayoffTransform call_transform(double strike) {
    if (!(strike > 0.0)) throw ConfigError("call_transform: strike must be positive");
    PayoffTransform t;
    t.name = "call";
    t.strike = strike;
    t.strip_lo = 1.0;
    t.strip_hi = std::numeric_limits<double>::infinity();
    t.discounted = true;
    t.scale = strike;
    t.log_strike = std::log(strike);
    t.shape = [](cplx z) {
        const cplx iz(-z.imag(), z.real());
        return 1.0 / (iz * (1.0 + iz));
    };
    t.scale_of = [](double k) { return k; };
    return t;
}

PayoffTransform digital_transform(double strike) {
    if (!(strike > 0.0))
        throw ConfigError("digital_transform: strike must be positive");
    PayoffTransform t;
    t.name = "digital";
    t.strike = strike;
    t.strip_lo = 0.0;
    t.strip_hi = std::numeric_limits<double>::infinity();
    t.discounted = false;
    t.scale = 1.0;
    t.log_strike = std::log(strike);
    t.shape = [](cplx z) {
        const cplx iz(-z.imag(), z.real());
        return -1.0 / iz;
    };
    t.scale_of = [](double) { return 1.0; };
    return t;
}

double put_price_via_parity(double call, double S, double K, double r, double tau) {
    if (!(S > 0.0) || !(K > 0.0))
        throw ConfigError("put_price_via_parity: spot and strike must be positive");
    return call - S + K * std::exp(-r * tau);
}

} // namespace levy
