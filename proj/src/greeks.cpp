#include "levy/greeks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "levy/errors.hpp"

namespace levy {

namespace {

cplx times_i(cplx z) { return {-z.imag(), z.real()}; }

using Mult = std::function<cplx(cplx, cplx)>;

double normal_pdf(double u) {
    return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
}

/** Gauss-Legendre nodes and weights on [-1, 1] via Newton iteration on the
 *  Legendre recurrence. */
std::vector<std::pair<double, double>> gauss_legendre(int n) {
    std::vector<std::pair<double, double>> out(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double p1 = 1.0, dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            p1 = t;
            for (int j = 2; j <= n; ++j) {
                const double p2 =
                    ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::fabs(dt) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - t * t) * dp * dp);
        out[static_cast<std::size_t>(i)] = {-t, w};
        out[static_cast<std::size_t>(n - 1 - i)] = {t, w};
    }
    return out;
}

double require_sigma(const PricingEngine& engine, const std::string& name) {
    const double sigma = engine.model().sigma();
    if (!(sigma > 0.0))
        throw DomainError(name + ": differentiates in the diffusion "
                          "volatility, which '" + engine.model().name() +
                          "' does not have");
    return sigma;
}

void require_dual_contour(const PricingEngine& engine, const std::string& name) {
    if (!(engine.grid().v() > 1.0))
        throw DomainError(name + ": needs a contour with Im z > 1");
}

void require_base_contour(const PricingEngine& engine, const std::string& name) {
    if (!(engine.grid().v() > 0.0))
        throw DomainError(name + ": needs a contour with Im z > 0");
}

Mult density_mult(int n) {
    return [n](cplx z, cplx) {
        const cplx iz = times_i(z);
        cplx m = 1.0;
        for (int i = 0; i < n; ++i) m *= iz;
        return m;
    };
}

Mult tail_mult() {
    return [](cplx z, cplx) { return 1.0 / times_i(z); };
}

Mult dual_tail_mult() {
    return [](cplx z, cplx) { return 1.0 / (1.0 + times_i(z)); };
}

Mult psi_mult() {
    return [](cplx, cplx p) { return p; };
}

Mult charm_mult(double r) {
    return [r](cplx z, cplx p) { return r - p / (1.0 + times_i(z)); };
}

Mult theta_jump_mult(double sigma) {
    const double half_sig2 = 0.5 * sigma * sigma;
    return [half_sig2](cplx z, cplx p) {
        const cplx iz = times_i(z);
        return (p + half_sig2 * (z * z - iz)) / (iz * (1.0 + iz));
    };
}

} // namespace

const std::vector<GreekKernel>& greek_kernels() {
    static const std::vector<GreekKernel> kernels = [] {
        std::vector<GreekKernel> k;
        k.push_back({"delta", false, [](cplx z, cplx, const KernelContext& c) {
                         return -times_i(z) / c.S;
                     }});
        k.push_back({"rho", false, [](cplx z, cplx, const KernelContext& c) {
                         return -c.tau * (1.0 + times_i(z));
                     }});
        k.push_back({"vega", true, [](cplx z, cplx, const KernelContext& c) {
                         const cplx iz = times_i(z);
                         return c.tau * c.sigma * iz * (1.0 + iz);
                     }});
        k.push_back({"theta", false, [](cplx z, cplx p, const KernelContext& c) {
                         return p - (1.0 + times_i(z)) * c.r;
                     }});
        k.push_back({"gamma", false, [](cplx z, cplx, const KernelContext& c) {
                         const cplx iz = times_i(z);
                         return iz * (1.0 + iz) / (c.S * c.S);
                     }});
        k.push_back({"vanna", true, [](cplx z, cplx, const KernelContext& c) {
                         return c.tau * c.sigma * z * z * (1.0 + times_i(z)) /
                                c.S;
                     }});
        k.push_back({"vomma", true, [](cplx z, cplx, const KernelContext& c) {
                         const cplx iz = times_i(z);
                         const cplx w = iz * (1.0 + iz);
                         return c.tau * (1.0 + c.tau * c.sigma * c.sigma * w) * w;
                     }});
        k.push_back({"charm", false, [](cplx z, cplx p, const KernelContext& c) {
                         const cplx iz = times_i(z);
                         return -iz * (p - (1.0 + iz) * c.r) / c.S;
                     }});
        k.push_back({"veta", true, [](cplx z, cplx p, const KernelContext& c) {
                         const cplx iz = times_i(z);
                         return c.sigma * iz * (1.0 + iz) *
                                (c.tau * p - (1.0 + iz) * c.r * c.tau + 1.0);
                     }});
        k.push_back({"vera", true, [](cplx z, cplx, const KernelContext& c) {
                         const cplx iz = times_i(z);
                         const cplx opz = 1.0 + iz;
                         return -c.tau * c.tau * c.sigma * iz * opz * opz;
                     }});
        k.push_back({"color", false, [](cplx z, cplx p, const KernelContext& c) {
                         const cplx iz = times_i(z);
                         return iz * (1.0 + iz) * (p - (1.0 + iz) * c.r) /
                                (c.S * c.S);
                     }});
        k.push_back({"speed", false, [](cplx z, cplx, const KernelContext& c) {
                         const cplx iz = times_i(z);
                         return -iz * (1.0 + iz) * (2.0 + iz) /
                                (c.S * c.S * c.S);
                     }});
        k.push_back({"ultima", true, [](cplx z, cplx, const KernelContext& c) {
                         const cplx iz = times_i(z);
                         const cplx w = iz * (1.0 + iz);
                         const double ts = c.tau * c.sigma;
                         return 3.0 * c.tau * ts * w * w +
                                ts * ts * ts * w * w * w;
                     }});
        k.push_back({"zomma", true, [](cplx z, cplx, const KernelContext& c) {
                         const cplx iz = times_i(z);
                         const cplx w = iz * (1.0 + iz);
                         return c.tau * c.sigma * w * w / (c.S * c.S);
                     }});
        return k;
    }();
    return kernels;
}

const GreekKernel& greek_kernel(const std::string& name) {
    for (const auto& k : greek_kernels())
        if (k.name == name) return k;
    throw ConfigError("greek_kernel: unknown Greek '" + name + "'");
}

GreekValue kernel_greek(const PricingEngine& engine, double strike,
                        const std::string& name) {
    const GreekKernel& kernel = greek_kernel(name);
    const auto& mkt = engine.market();
    const KernelContext ctx{mkt.S, mkt.r, mkt.tau, engine.model().sigma()};
    if (kernel.needs_sigma) (void)require_sigma(engine, "kernel_greek(" + name + ")");
    require_dual_contour(engine, "kernel_greek(" + name + ")");
    const auto mult = [&](cplx z, cplx p) {
        const cplx iz = times_i(z);
        return kernel.mult(z, p, ctx) / (iz * (1.0 + iz));
    };
    engine.require_decay(mult, "kernel_greek(" + name + ")");
    const double x = engine.log_moneyness(strike);
    const IntegralResult res = engine.line_integral(x, mult);
    const double scale = mkt.S * std::exp(x);
    return {scale * res.value, scale * res.imag_residual};
}

void require_closed_decay(const PricingEngine& engine, const std::string& name) {
    const double r = engine.market().r;
    const double sigma = engine.model().sigma();
    std::vector<Mult> probes;
    if (name == "delta") {
        probes = {dual_tail_mult()};
    } else if (name == "rho") {
        probes = {tail_mult()};
    } else if (name == "vega" || name == "gamma") {
        probes = {density_mult(0)};
    } else if (name == "theta") {
        probes = {tail_mult(), density_mult(0), theta_jump_mult(sigma)};
    } else if (name == "vanna") {
        probes = {density_mult(1)};
    } else if (name == "vomma") {
        probes = {density_mult(0), density_mult(1), density_mult(2)};
    } else if (name == "charm") {
        probes = {charm_mult(r)};
    } else if (name == "veta" || name == "color") {
        probes = {density_mult(0), density_mult(1), psi_mult()};
    } else if (name == "vera" || name == "speed") {
        probes = {density_mult(0), density_mult(1)};
    } else if (name == "ultima") {
        probes = {density_mult(1), density_mult(2), density_mult(3),
                  density_mult(4)};
    } else if (name == "zomma") {
        probes = {density_mult(1), density_mult(2)};
    } else {
        throw ConfigError("require_closed_decay: unknown Greek '" + name + "'");
    }
    for (const auto& p : probes)
        engine.require_decay(p, "closed_greek(" + name + ")");
}

double closed_from_bundle(const PricingEngine& engine,
                          const PricingEngine::Bundle& b, double x,
                          const std::string& name, double* used_residual) {
    using Bundle = PricingEngine::Bundle;
    const auto& mkt = engine.market();
    const double S = mkt.S, r = mkt.r, tau = mkt.tau;
    const double sigma = engine.model().sigma();
    const double ex = std::exp(x);
    double used = 0.0;
    const auto part = [&](Bundle::Component c, double value) {
        used = std::max(used, b.residual[c]);
        return value;
    };
    const auto f = [&](int n) {
        return part(static_cast<Bundle::Component>(Bundle::c_f0 + n), b.f[n]);
    };
    const auto sigma_checked = [&] {
        return require_sigma(engine, "closed_greek(" + name + ")");
    };
    const auto dual_checked = [&] {
        if (!b.dual_valid)
            throw DomainError("closed_greek(" + name +
                              "): needs a contour with Im z > 1");
        return part(Bundle::c_dual, b.q_dual);
    };
    const auto base_checked = [&] {
        require_base_contour(engine, "closed_greek(" + name + ")");
        return part(Bundle::c_q, b.q);
    };
    const double value = [&] {
        if (name == "delta") return dual_checked();
        if (name == "rho") return tau * S * ex * base_checked();
        if (name == "vega") return S * tau * sigma_checked() * ex * f(0);
        if (name == "theta")
            return S * (r * ex * base_checked() +
                        0.5 * sigma * sigma * ex * f(0) +
                        ex * part(Bundle::c_theta_jump_w, b.theta_jump_w));
        if (name == "gamma") return ex * f(0) / S;
        if (name == "vanna") return -tau * sigma_checked() * ex * f(1);
        if (name == "vomma")
            return S * tau * ex *
                   (f(0) + tau * sigma_checked() * sigma * (f(1) + f(2)));
        if (name == "charm") return ex * part(Bundle::c_charm_w, b.charm_w);
        if (name == "veta")
            return S * sigma_checked() * ex *
                   ((1.0 - r * tau) * f(0) +
                    tau * (part(Bundle::c_psi_w, b.psi_w) - r * f(1)));
        if (name == "vera")
            return -S * tau * tau * sigma_checked() * ex * (f(0) + f(1));
        if (name == "color")
            return (ex / S) *
                   (part(Bundle::c_psi_w, b.psi_w) - r * (f(0) + f(1)));
        if (name == "speed") return -ex * (2.0 * f(0) + f(1)) / (S * S);
        if (name == "ultima")
            return S * tau * tau * sigma_checked() * ex *
                   (3.0 * (f(1) + f(2)) +
                    tau * sigma * sigma * (f(2) + 2.0 * f(3) + f(4)));
        if (name == "zomma")
            return tau * sigma_checked() * ex * (f(1) + f(2)) / S;
        throw ConfigError("closed_from_bundle: unknown Greek '" + name + "'");
    }();
    if (used_residual) *used_residual = used;
    return value;
}

GreekValue closed_greek(const PricingEngine& engine, double strike,
                        const std::string& name) {
    require_closed_decay(engine, name);
    const double x = engine.log_moneyness(strike);
    const auto bundle = engine.base_bundle(x);
    double residual = 0.0;
    const double value = closed_from_bundle(engine, bundle, x, name, &residual);
    return {value, residual};
}

double call_greek(const PricingEngine& engine, double strike,
                  const std::string& name, GreekRoute route) {
    return route == GreekRoute::kernel ? kernel_greek(engine, strike, name).value
                                       : closed_greek(engine, strike, name).value;
}

double param_sensitivity(const PricingEngine& engine, double strike,
                         const std::string& param) {
    if (!engine.model().has_param(param))
        throw ConfigError("param_sensitivity: model '" + engine.model().name() +
                          "' has no parameter '" + param + "'");
    require_dual_contour(engine, "param_sensitivity(" + param + ")");
    const double tau = engine.market().tau;
    const ModelSpec& model = engine.model();
    const auto mult = [&](cplx z, cplx) {
        const cplx iz = times_i(z);
        return tau * model.psi_param_derivative(param, -z) / (iz * (1.0 + iz));
    };
    engine.require_decay(mult, "param_sensitivity(" + param + ")");
    const double x = engine.log_moneyness(strike);
    return engine.market().S * std::exp(x) * engine.line_integral(x, mult).value;
}

double jump_intensity_sensitivity(const PricingEngine& engine, double strike) {
    if (engine.model().kind() != ModelSpec::Kind::merton)
        throw ConfigError("jump_intensity_sensitivity: needs the "
                          "jump-diffusion model");
    require_dual_contour(engine, "jump_intensity_sensitivity");
    const double tau = engine.market().tau;
    const double muj = engine.model().param_value("muj");
    const double sigmaj = engine.model().param_value("sigmaj");
    const double kappa = std::expm1(muj + 0.5 * sigmaj * sigmaj);
    const auto mult = [=](cplx z, cplx) {
        const cplx iz = times_i(z);
        const cplx jump = std::exp(-iz * muj - 0.5 * z * z * sigmaj * sigmaj);
        return tau * (jump - 1.0 + iz * kappa) / (iz * (1.0 + iz));
    };
    engine.require_decay(mult, "jump_intensity_sensitivity");
    const double x = engine.log_moneyness(strike);
    return engine.market().S * std::exp(x) * engine.line_integral(x, mult).value;
}

DigitalGreeks digital_greeks(const PricingEngine& engine, double strike) {
    require_base_contour(engine, "digital_greeks");
    engine.require_decay(tail_mult(), "digital_greeks");
    engine.require_decay(density_mult(0), "digital_greeks");
    engine.require_decay(density_mult(1), "digital_greeks");
    const auto& mkt = engine.market();
    const double x = engine.log_moneyness(strike);
    const auto b = engine.base_bundle(x);
    if (b.q < -1e-7 || b.q > 1.0 + 1e-7)
        throw DomainError("digital_greeks: probability " + std::to_string(b.q) +
                          " escaped [0, 1] beyond tolerance; the contour or "
                          "truncation width is unsound");
    DigitalGreeks out;
    out.value = std::clamp(b.q, 0.0, 1.0);
    out.delta = b.f[0] / mkt.S;
    out.gamma = -(b.f[0] + b.f[1]) / (mkt.S * mkt.S);
    const double sigma = engine.model().sigma();
    out.vega_defined = sigma > 0.0;
    out.vega = out.vega_defined ? -mkt.tau * sigma * (b.f[0] + b.f[1]) : 0.0;
    return out;
}

double decomposed_greek(const PricingEngine& engine, double strike,
                        const std::string& name) {
    if (engine.model().kind() != ModelSpec::Kind::merton)
        throw ConfigError("decomposed_greek: the jump-size decomposition "
                          "needs a finite-intensity jump model");
    if (name != "theta" && name != "charm" && name != "veta" && name != "color")
        throw ConfigError("decomposed_greek: no jump decomposition for '" +
                          name + "'");
    require_dual_contour(engine, "decomposed_greek(" + name + ")");
    require_closed_decay(engine, name);
    const auto& mkt = engine.market();
    const double S = mkt.S, r = mkt.r, tau = mkt.tau;
    const double sigma = engine.model().sigma();
    const double muj = engine.model().param_value("muj");
    const double sigmaj = engine.model().param_value("sigmaj");
    const double lambda = engine.model().param_value("lambda");
    const double x = engine.log_moneyness(strike);
    const auto b = engine.base_bundle(x);
    const double ex = std::exp(x);

    // average over jump sizes against the jump measure
    // lambda * phi((y - muj) / sigmaj) / sigmaj dy
    const auto gl = gauss_legendre(201);
    const double mid = muj, halfw = 8.0 * sigmaj;
    const auto jump_average = [&](const std::function<double(double)>& term) {
        double sum = 0.0;
        for (const auto& [t, w] : gl) {
            const double y = mid + halfw * t;
            const double density = lambda * normal_pdf((y - muj) / sigmaj) / sigmaj;
            sum += w * halfw * density * term(y);
        }
        return sum;
    };

    if (name == "theta") {
        const double call_here = engine.call_value(x);
        const double dual_tail = b.q_dual;
        const double jump = jump_average([&](double y) {
            return std::exp(y) * engine.call_value(x - y) - call_here -
                   std::expm1(y) * S * dual_tail;
        });
        return S * (r * ex * b.q + 0.5 * sigma * sigma * ex * b.f[0]) + jump;
    }
    if (name == "charm") {
        const double dual_here = b.q_dual;
        const double jump = jump_average([&](double y) {
            return std::exp(y) * (dual_here - engine.tail(x - y, Measure::dual)) +
                   std::expm1(y) * ex * b.f[0];
        });
        return r * ex * b.f[0] - 0.5 * sigma * sigma * ex * b.f[1] - jump;
    }
    // veta and color share the density-shift average
    const double jump = jump_average([&](double y) {
        return engine.density(x - y, 0) - b.f[0] + std::expm1(y) * b.f[1];
    });
    if (name == "veta")
        return S * sigma * ex *
               (b.f[0] - r * tau * (b.f[0] + b.f[1]) +
                0.5 * tau * sigma * sigma * (b.f[1] + b.f[2]) + tau * jump);
    return (ex / S) * (0.5 * sigma * sigma * (b.f[1] + b.f[2]) + jump -
                       r * (b.f[0] + b.f[1]));
}

std::vector<GreekRow> greek_report(const PricingEngine& engine, double strike,
                                   const std::vector<std::string>& names) {
    std::vector<GreekRow> rows;
    rows.reserve(names.size());
    for (const std::string& name : names) {
        GreekRow row;
        row.name = name;
        const auto add_note = [&row](const std::string& msg) {
            if (!row.note.empty()) row.note += "; ";
            row.note += msg;
        };
        if (name.rfind("param:", 0) == 0) {
            const std::string param = name.substr(6);
            try {
                row.kernel_value = param_sensitivity(engine, strike, param);
                row.kernel_ok = true;
            } catch (const std::exception& e) {
                add_note(e.what());
            }
            if (param == "lambda" &&
                engine.model().kind() == ModelSpec::Kind::merton) {
                try {
                    row.closed_value = jump_intensity_sensitivity(engine, strike);
                    row.closed_ok = true;
                } catch (const std::exception& e) {
                    add_note(e.what());
                }
            } else {
                add_note("no independent second route for this parameter");
            }
        } else {
            try {
                const GreekValue kv = kernel_greek(engine, strike, name);
                row.kernel_value = kv.value;
                row.imag_residual = kv.imag_residual;
                row.kernel_ok = true;
            } catch (const std::exception& e) {
                add_note(std::string("kernel: ") + e.what());
            }
            try {
                const GreekValue cv = closed_greek(engine, strike, name);
                row.closed_value = cv.value;
                row.imag_residual = std::max(row.imag_residual, cv.imag_residual);
                row.closed_ok = true;
            } catch (const std::exception& e) {
                add_note(std::string("closed: ") + e.what());
            }
        }
        if (row.kernel_ok && row.closed_ok)
            row.discrepancy = std::fabs(row.kernel_value - row.closed_value);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace levy
