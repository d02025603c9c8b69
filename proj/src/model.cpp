#include "levy/model.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "levy/errors.hpp"
#include "levy/oracle.hpp"

namespace levy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

cplx times_i(cplx z) { return {-z.imag(), z.real()}; }

// integral of y e^{ay} dy over (0, 1)
double ramp_exp_integral(double a) {
    if (std::abs(a) < 1e-8) return 0.5 + a / 3.0;
    return (std::exp(a) * (a - 1.0) + 1.0) / (a * a);
}

// E1(x) = integral of e^{-t}/t dt over (x, inf), x > 0
double exp_int_e1(double x) { return -std::expint(-x); }

LevyMeasureMoments merton_moments(double lambda, double mu, double s) {
    using oracle::norm_cdf;
    using oracle::norm_pdf;
    LevyMeasureMoments m;
    const double alpha = (-1.0 - mu) / s;
    const double beta = (1.0 - mu) / s;
    m.small_square =
        lambda * ((mu * mu + s * s) * (norm_cdf(beta) - norm_cdf(alpha)) +
                  2.0 * mu * s * (norm_pdf(alpha) - norm_pdf(beta)) +
                  s * s * (alpha * norm_pdf(alpha) - beta * norm_pdf(beta)));
    m.large_mass = lambda * (norm_cdf((mu - 1.0) / s) + norm_cdf((-1.0 - mu) / s));
    m.exp_tail = [lambda, mu, s](double v) {
        const double shifted = mu + v * s * s;
        return lambda * std::exp(v * mu + 0.5 * v * v * s * s) *
               (norm_cdf((shifted - 1.0) / s) + norm_cdf((-1.0 - shifted) / s));
    };
    return m;
}

// Lévy density (1/(nu |y|)) exp(a y - b |y|), b > |a|
LevyMeasureMoments vg_moments(double nu, double a, double b) {
    LevyMeasureMoments m;
    m.small_square = (ramp_exp_integral(a - b) + ramp_exp_integral(-(a + b))) / nu;
    m.exp_tail = [nu, a, b](double v) {
        if (b - a - v <= 0.0 || a + b + v <= 0.0) return kInf;
        return (exp_int_e1(b - a - v) + exp_int_e1(a + b + v)) / nu;
    };
    m.large_mass = m.exp_tail(0.0);
    return m;
}

} // namespace

ModelSpec ModelSpec::black_scholes(double sigma) {
    if (!(sigma > 0.0))
        throw ConfigError("black_scholes: sigma must be positive");
    ModelSpec m;
    m.kind_ = Kind::black_scholes;
    m.name_ = "black_scholes";
    m.sigma_ = sigma;
    m.strip_lo_ = -kInf;
    m.strip_hi_ = kInf;
    m.moments_.exp_tail = [](double) { return 0.0; };
    m.check_martingale();
    return m;
}

ModelSpec ModelSpec::merton(double sigma, double muj, double sigmaj, double lambda) {
    if (sigma < 0.0) throw ConfigError("merton: sigma must be nonnegative");
    if (!(sigmaj > 0.0)) throw ConfigError("merton: sigmaj must be positive");
    if (!(lambda > 0.0)) throw ConfigError("merton: lambda must be positive");
    ModelSpec m;
    m.kind_ = Kind::merton;
    m.name_ = "merton";
    m.sigma_ = sigma;
    m.muj_ = muj;
    m.sigmaj_ = sigmaj;
    m.lambda_ = lambda;
    m.kappa_ = std::expm1(muj + 0.5 * sigmaj * sigmaj);
    m.strip_lo_ = -kInf;
    m.strip_hi_ = kInf;
    m.moments_ = merton_moments(lambda, muj, sigmaj);
    m.check_martingale();
    return m;
}

ModelSpec ModelSpec::variance_gamma(double rho, double nu, double theta) {
    if (!(rho > 0.0)) throw ConfigError("variance_gamma: rho must be positive");
    if (!(nu > 0.0)) throw ConfigError("variance_gamma: nu must be positive");
    ModelSpec m;
    m.kind_ = Kind::variance_gamma;
    m.name_ = "variance_gamma";
    m.rho_ = rho;
    m.nu_ = nu;
    m.theta_ = theta;
    m.vg_c_ = (1.0 - theta * nu) - 0.5 * rho * rho * nu;
    if (!(m.vg_c_ > 0.0))
        throw ConfigError(
            "variance_gamma: martingale normalization needs theta*nu + rho^2*nu/2 < 1");
    // strip ends solve 1 + beta theta nu - beta^2 rho^2 nu / 2 = 0
    const double disc = std::sqrt(theta * theta * nu * nu + 2.0 * rho * rho * nu);
    m.strip_lo_ = (theta * nu - disc) / (rho * rho * nu);
    m.strip_hi_ = (theta * nu + disc) / (rho * rho * nu);
    const double a = theta / (rho * rho);
    const double b = disc / (rho * rho * nu);
    m.moments_ = vg_moments(nu, a, b);
    m.check_martingale();
    return m;
}

ModelSpec ModelSpec::custom(std::string name, double sigma,
                            std::function<cplx(cplx)> psi, double strip_lo,
                            double strip_hi, LevyMeasureMoments moments,
                            std::map<std::string, std::function<cplx(cplx)>>
                                param_derivatives,
                            bool require_martingale) {
    if (name.empty()) throw ConfigError("custom model: name must not be empty");
    if (!psi) throw ConfigError("custom model: psi callable is required");
    if (sigma < 0.0) throw ConfigError("custom model: sigma must be nonnegative");
    if (!(strip_lo < strip_hi))
        throw ConfigError("custom model: strip_lo must be below strip_hi");
    ModelSpec m;
    m.kind_ = Kind::custom;
    m.name_ = std::move(name);
    m.sigma_ = sigma;
    m.custom_psi_ = std::move(psi);
    m.custom_dpsi_ = std::move(param_derivatives);
    m.strip_lo_ = strip_lo;
    m.strip_hi_ = strip_hi;
    m.moments_ = std::move(moments);
    if (!m.moments_.exp_tail) m.moments_.exp_tail = [](double) { return 0.0; };
    if (require_martingale) {
        if (!m.strip_contains(-1.0))
            throw ConfigError("custom model: strip must contain Im z = -1 "
                              "for the martingale normalization");
        m.check_martingale();
    }
    return m;
}

void ModelSpec::check_martingale() const {
    const cplx r = psi(cplx(0.0, -1.0));
    if (!(std::abs(r) <= 1e-10))
        throw ConfigError("model '" + name_ + "' is not risk-neutral: psi(-i) = " +
                          std::to_string(std::abs(r)));
}

cplx ModelSpec::psi(cplx z) const {
    switch (kind_) {
        case Kind::black_scholes: {
            const cplx iz = times_i(z);
            return -0.5 * sigma_ * sigma_ * (z * z + iz);
        }
        case Kind::merton: {
            const cplx iz = times_i(z);
            const cplx zz = z * z;
            const cplx jump = std::exp(iz * muj_ - zz * (0.5 * sigmaj_ * sigmaj_));
            return -0.5 * sigma_ * sigma_ * zz -
                   iz * (0.5 * sigma_ * sigma_ + lambda_ * kappa_) +
                   lambda_ * (jump - 1.0);
        }
        case Kind::variance_gamma: {
            const cplx iz = times_i(z);
            const cplx arg = (1.0 - iz * (theta_ * nu_)) + z * z * (0.5 * rho_ * rho_ * nu_);
            return (iz * std::log(vg_c_) - std::log(arg)) / nu_;
        }
        case Kind::custom:
            return custom_psi_(z);
    }
    throw ConfigError("model: unknown kind");
}

std::vector<std::string> ModelSpec::param_names() const {
    switch (kind_) {
        case Kind::black_scholes: return {"sigma"};
        case Kind::merton: return {"sigma", "muj", "sigmaj", "lambda"};
        case Kind::variance_gamma: return {"rho", "nu", "theta"};
        case Kind::custom: {
            std::vector<std::string> names;
            for (const auto& [k, v] : custom_dpsi_) names.push_back(k);
            return names;
        }
    }
    return {};
}

bool ModelSpec::has_param(const std::string& param) const {
    for (const auto& n : param_names())
        if (n == param) return true;
    return false;
}

double ModelSpec::param_value(const std::string& param) const {
    switch (kind_) {
        case Kind::black_scholes:
            if (param == "sigma") return sigma_;
            break;
        case Kind::merton:
            if (param == "sigma") return sigma_;
            if (param == "muj") return muj_;
            if (param == "sigmaj") return sigmaj_;
            if (param == "lambda") return lambda_;
            break;
        case Kind::variance_gamma:
            if (param == "rho") return rho_;
            if (param == "nu") return nu_;
            if (param == "theta") return theta_;
            break;
        case Kind::custom:
            break;
    }
    throw ConfigError("model '" + name_ + "' has no parameter '" + param + "'");
}

cplx ModelSpec::psi_param_derivative(const std::string& param, cplx z) const {
    const cplx iz = times_i(z);
    switch (kind_) {
        case Kind::black_scholes:
            if (param == "sigma") return -sigma_ * (z * z + iz);
            break;
        case Kind::merton: {
            const cplx jump = std::exp(iz * muj_ - z * z * (0.5 * sigmaj_ * sigmaj_));
            const double mean_exp = 1.0 + kappa_; // e^{muj + sigmaj^2/2}
            if (param == "sigma") return -sigma_ * (z * z + iz);
            if (param == "muj") return lambda_ * iz * (jump - mean_exp);
            if (param == "sigmaj")
                return lambda_ * sigmaj_ * (-iz * mean_exp - z * z * jump);
            if (param == "lambda") return -iz * kappa_ + (jump - 1.0);
            break;
        }
        case Kind::variance_gamma: {
            const cplx arg =
                (1.0 - iz * (theta_ * nu_)) + z * z * (0.5 * rho_ * rho_ * nu_);
            if (param == "rho")
                return -iz * (rho_ / vg_c_) - z * z * (rho_ / arg);
            if (param == "theta") return -iz / vg_c_ + iz / arg;
            if (param == "nu") {
                const cplx psi_z = (iz * std::log(vg_c_) - std::log(arg)) / nu_;
                const cplx dc = iz * ((-theta_ - 0.5 * rho_ * rho_) / vg_c_);
                const cplx darg = (-iz * theta_ + z * z * (0.5 * rho_ * rho_)) / arg;
                return -psi_z / nu_ + (dc - darg) / nu_;
            }
            break;
        }
        case Kind::custom: {
            auto it = custom_dpsi_.find(param);
            if (it != custom_dpsi_.end()) return it->second(z);
            break;
        }
    }
    throw ConfigError("model '" + name_ + "' has no analytic derivative for '" +
                      param + "'");
}

double ModelSpec::psi_growth_bound(double contour_v, double abs_z) const {
    const double tail = moments_.exp_tail(contour_v);
    if (!std::isfinite(tail))
        throw DomainError("psi_growth_bound: exponential moment of the Lévy "
                          "measure diverges at v = " + std::to_string(contour_v));
    return (abs_z * abs_z + abs_z) *
               (std::exp(contour_v) * 0.5 * moments_.small_square +
                0.5 * sigma_ * sigma_) +
           2.0 * (tail + moments_.large_mass);
}

ModelSpec ModelSpec::esscher_dual() const {
    LevyMeasureMoments dual;
    switch (kind_) {
        case Kind::black_scholes:
            dual.exp_tail = [](double) { return 0.0; };
            break;
        case Kind::merton:
            dual = merton_moments(lambda_ * (1.0 + kappa_), muj_ + sigmaj_ * sigmaj_,
                                  sigmaj_);
            break;
        case Kind::variance_gamma: {
            // e^y reweighting shifts the tilt a = theta/rho^2 by one and keeps
            // the decay rate b, which pins the dual (rho, theta) at the same nu
            const double a = theta_ / (rho_ * rho_);
            const double disc =
                std::sqrt(theta_ * theta_ * nu_ * nu_ + 2.0 * rho_ * rho_ * nu_);
            const double b = disc / (rho_ * rho_ * nu_);
            dual = vg_moments(nu_, a + 1.0, b);
            break;
        }
        case Kind::custom: {
            // exact tail shift; e * m2 bounds the reweighted small-jump moment
            auto base_tail = moments_.exp_tail;
            dual.small_square = std::exp(1.0) * moments_.small_square;
            dual.exp_tail = [base_tail](double v) { return base_tail(v + 1.0); };
            dual.large_mass = base_tail(1.0);
            break;
        }
    }
    std::map<std::string, std::function<cplx(cplx)>> dual_dpsi;
    for (const auto& p : param_names()) {
        ModelSpec base = *this;
        dual_dpsi[p] = [base, p](cplx z) {
            return base.psi_param_derivative(p, z - cplx(0.0, 1.0));
        };
    }

    ModelSpec base = *this;
    return custom(
        name_ + "_dual", sigma_,
        [base](cplx z) { return base.psi(z - cplx(0.0, 1.0)); }, strip_lo_ + 1.0,
        strip_hi_ + 1.0, std::move(dual), std::move(dual_dpsi),
        /*require_martingale=*/false);
}

} // namespace levy
