#include "levy/oracle.hpp"

#include <cmath>
#include <numbers>

#include "levy/errors.hpp"

namespace levy::oracle {

double norm_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double norm_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

namespace {

struct BsInputs {
    double S, K, r, tau, sigma;
    double sqt;      // sigma * sqrt(tau)
    double d1, d2;
    double disc;     // e^{-r tau}
};

BsInputs prepare(double S, double K, double r, double tau, double sigma) {
    if (!(S > 0.0) || !(K > 0.0))
        throw ConfigError("bs_value: spot and strike must be positive");
    if (!(tau > 0.0)) throw ConfigError("bs_value: tau must be positive");
    if (!(sigma > 0.0)) throw ConfigError("bs_value: sigma must be positive");
    BsInputs b{};
    b.S = S;
    b.K = K;
    b.r = r;
    b.tau = tau;
    b.sigma = sigma;
    b.sqt = sigma * std::sqrt(tau);
    b.d1 = (std::log(S / K) + (r + 0.5 * sigma * sigma) * tau) / b.sqt;
    b.d2 = b.d1 - b.sqt;
    b.disc = std::exp(-r * tau);
    return b;
}

} // namespace

const std::vector<std::string>& bs_names() {
    static const std::vector<std::string> names = {
        "price", "delta", "rho",   "vega",  "theta",  "gamma", "vanna",
        "vomma", "charm", "veta",  "vera",  "color",  "speed", "ultima",
        "zomma", "digital", "digital_delta", "digital_gamma", "digital_vega"};
    return names;
}

double bs_value(const std::string& name, double S, double K, double r,
                double tau, double sigma) {
    const BsInputs b = prepare(S, K, r, tau, sigma);
    const double nd1 = norm_cdf(b.d1);
    const double nd2 = norm_cdf(b.d2);
    const double pd1 = norm_pdf(b.d1);
    const double pd2 = norm_pdf(b.d2);
    const double gamma = pd1 / (S * b.sqt);
    const double vega = S * pd1 * std::sqrt(tau);
    // d(d1)/dtau with strike held fixed
    const double d1_tau = (r + 0.5 * sigma * sigma) / b.sqt - b.d1 / (2.0 * tau);

    if (name == "price") return S * nd1 - K * b.disc * nd2;
    if (name == "delta") return nd1;
    if (name == "rho") return K * tau * b.disc * nd2;
    if (name == "vega") return vega;
    if (name == "theta") return S * pd1 * sigma / (2.0 * std::sqrt(tau)) + r * K * b.disc * nd2;
    if (name == "gamma") return gamma;
    if (name == "vanna") return -pd1 * b.d2 / sigma;
    if (name == "vomma") return vega * b.d1 * b.d2 / sigma;
    if (name == "charm") return pd1 * d1_tau;
    if (name == "veta")
        return S * pd1 *
               ((1.0 + b.d1 * b.d1) / (2.0 * std::sqrt(tau)) -
                b.d1 * (r + 0.5 * sigma * sigma) / sigma);
    if (name == "vera") return -S * tau * b.d1 * pd1 / sigma;
    if (name == "color") return gamma * (-b.d1 * d1_tau - 1.0 / (2.0 * tau));
    if (name == "speed") return -gamma / S * (1.0 + b.d1 / b.sqt);
    if (name == "ultima")
        return -vega / (sigma * sigma) *
               (b.d1 * b.d2 * (1.0 - b.d1 * b.d2) + b.d1 * b.d1 + b.d2 * b.d2);
    if (name == "zomma") return gamma * (b.d1 * b.d2 - 1.0) / sigma;
    if (name == "digital") return nd2;
    if (name == "digital_delta") return pd2 / (S * b.sqt);
    if (name == "digital_gamma") return -pd2 * (b.d2 / b.sqt + 1.0) / (S * S * b.sqt);
    if (name == "digital_vega") return -pd2 * b.d1 / sigma;
    throw ConfigError("bs_value: unknown quantity '" + name + "'");
}

double bs_tail_q(double x, double tau, double sigma) {
    const double sqt = sigma * std::sqrt(tau);
    return norm_cdf((-x - 0.5 * sigma * sigma * tau) / sqt);
}

double bs_tail_dual(double x, double tau, double sigma) {
    const double sqt = sigma * std::sqrt(tau);
    return norm_cdf((-x + 0.5 * sigma * sigma * tau) / sqt);
}

double bs_density(double x, double tau, double sigma, int n) {
    if (n < 0 || n > 8) throw ConfigError("bs_density: n must be in 0..8");
    const double s = sigma * std::sqrt(tau);
    const double t = (x + 0.5 * sigma * sigma * tau) / s;
    // f^{(n)}(x) = (-1)^n He_n(t) phi(t) / s^{n+1}
    double he_prev = 0.0, he = 1.0;
    for (int k = 0; k < n; ++k) {
        const double next = t * he - static_cast<double>(k) * he_prev;
        he_prev = he;
        he = next;
    }
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return sign * he * norm_pdf(t) / std::pow(s, n + 1);
}

double finite_difference(const std::function<double(double)>& f, double at,
                         int order, double h) {
    if (h <= 0.0) {
        const double scale = std::max(1.0, std::abs(at));
        h = (order == 3 ? 1e-3 : 1e-4) * scale;
    }
    switch (order) {
        case 1:
            return (f(at + h) - f(at - h)) / (2.0 * h);
        case 2:
            return (f(at + h) - 2.0 * f(at) + f(at - h)) / (h * h);
        case 3:
            return (f(at + 2.0 * h) - 2.0 * f(at + h) + 2.0 * f(at - h) -
                    f(at - 2.0 * h)) /
                   (2.0 * h * h * h);
        default:
            throw ConfigError("finite_difference: order must be 1, 2 or 3");
    }
}

CurveError linf_error(const std::vector<double>& a, const std::vector<double>& b,
                      const std::vector<double>& xs) {
    if (a.size() != b.size() || a.size() != xs.size())
        throw ConfigError("linf_error: curves and grid must have equal length");
    if (a.empty()) throw ConfigError("linf_error: empty curves");
    CurveError e;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = std::abs(a[i] - b[i]);
        if (d > e.linf) {
            e.linf = d;
            e.location = xs[i];
            e.index = i;
        }
    }
    return e;
}

} // namespace levy::oracle
