#include "levy/tables.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>

#include "levy/errors.hpp"
#include "levy/greeks.hpp"
#include "levy/oracle.hpp"
#include "levy/parallel.hpp"
#include "levy/pricer.hpp"

namespace levy {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kPinnedN = std::size_t{1} << 22;

/** Phase recurrence re-anchor interval for the pointwise curve sums; matches
 *  the engine's line-integral evaluation. */
constexpr std::size_t kPhaseChunk = 256;

class Timer {
public:
    double seconds() const {
        return std::chrono::duration<double>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_ =
        std::chrono::steady_clock::now();
};

double resonant_width(std::size_t n, double delta) {
    return kTwoPi * static_cast<double>(n - 1) /
           (static_cast<double>(n) * delta);
}

TableRow value_row(const std::string& name, double computed, double reference,
                   double tolerance) {
    TableRow row;
    row.name = name;
    row.computed = computed;
    row.reference = reference;
    row.deviation = std::fabs(computed - reference);
    row.tolerance = tolerance;
    row.pass = row.deviation <= tolerance;
    return row;
}

TableRow bound_row(const std::string& name, double measured, double bound) {
    TableRow row;
    row.name = name;
    row.computed = measured;
    row.reference = 0.0;
    row.deviation = measured;
    row.tolerance = bound;
    row.pass = measured <= bound;
    return row;
}

TableReport finish(TableReport report, const Timer& timer) {
    report.elapsed_seconds = timer.seconds();
    report.pass = std::all_of(report.rows.begin(), report.rows.end(),
                              [](const TableRow& r) { return r.pass; });
    return report;
}

std::string describe(const PricingEngine& engine) {
    const MarketState& mkt = engine.market();
    const ContourSpec& spec = engine.grid().spec();
    std::ostringstream os;
    os << engine.model().name() << ", S=" << mkt.S << " r=" << mkt.r
       << " tau=" << mkt.tau << ", v=" << spec.v << " A=" << spec.A
       << " N=" << spec.N
       << (spec.rule == Rule::simpson ? " simpson" : " trapezoid");
    return os.str();
}

// Pinned run configurations -------------------------------------------------

ModelSpec table_model(int id) {
    switch (id) {
        case 1: return ModelSpec::black_scholes(0.1);
        case 2:
        case 3: return ModelSpec::merton(0.1, -0.005, 0.1, 1.0);
        case 4: return ModelSpec::merton(0.2, 0.05, 0.15, 0.5);
        default: return ModelSpec::variance_gamma(0.2, 1.0, -0.15);
    }
}

MarketState table_market(int id) {
    switch (id) {
        case 4: return {100.0, 0.07, 1.0};
        case 5: return {100.0, 0.05, 1.0};
        default: return {1.0, 0.05, 1.0};
    }
}

std::size_t pinned_n(int id) {
    return id == 2 ? std::size_t{1} << 21 : kPinnedN;
}

ContourSpec table_contour(int id, std::size_t n) {
    switch (id) {
        case 1: return {1.5, 300.0, n, Rule::simpson};
        case 2: return {1.5, 500.0, n, Rule::simpson};
        case 3: return {1.5, 1000.0, n, Rule::simpson};
        case 4: return {0.5, resonant_width(n, 0.01), n, Rule::simpson};
        // the pinned references carry the truncation bias of this contour
        // height; the Gamma row reproduces only for v in about [1.22, 1.38]
        default: return {1.3, resonant_width(n, 0.01), n, Rule::simpson};
    }
}

void require_table_id(int id, int lo, const char* what) {
    if (id < lo || id > 5) {
        std::ostringstream os;
        os << what << ": table id must be " << lo << "..5, got " << id;
        throw ConfigError(os.str());
    }
}

// Pinned references ----------------------------------------------------------

struct ValuePin {
    const char* name;
    double reference;
    double allowance; // published |value(N) - value(2N)| convergence column
    double tolerance; // acceptance band for the recomputed value
};

const ValuePin kAtmPins[] = {
    {"call", 0.0547129, 2.6e-08, 1e-5},
    {"delta", 0.5273562, 2.5e-07, 1e-5},
    {"rho", 0.4726433, 2.2e-07, 1e-5},
    {"vega", 0.3077755, 1.5e-07, 1e-5},
    {"theta", 0.0524286, 2.5e-08, 1e-5},
    {"gamma", 3.0777550, 1.5e-06, 1e-5},
    {"vanna", 0.1538878, 7.3e-08, 1e-5},
    {"vomma", 0.9091780, 4.3e-07, 1e-5},
    {"charm", 0.1682860, 8.1e-08, 1e-5},
    {"veta", 0.1222076, 5.8e-08, 1e-5},
    {"vera", -0.1538878, 7.3e-08, 1e-5},
    // pinned negative: at the money, Gamma shrinks as maturity grows
    {"color", -1.8556795, 8.8e-07, 1e-5},
    {"speed", -4.6166325, 2.2e-06, 1e-4},
    {"ultima", -11.5390956, 5.5e-06, 1e-4},
    {"zomma", -21.6857699, 1.0e-05, 1e-4},
};

const ValuePin kJumpPins[] = {
    {"param:muj", 0.006703855, 4.7e-09, 1e-6},
    {"param:sigmaj", 0.239001230, 1.7e-07, 1e-6},
    {"param:lambda", 0.013407711, 9.6e-09, 1e-6},
};

const ValuePin kDigitalPins[] = {
    {"digital", 0.531270245, 3.8e-07, 1e-6},
    {"digital_delta", 0.016610457, 1.2e-08, 1e-6},
    {"digital_gamma", -0.000280032, 2.0e-10, 1e-6},
    {"digital_vega", -0.560064763, 4.0e-07, 1e-6},
};

const ValuePin kVgPins[] = {
    {"call", 11.26689919, 8.1e-06, 1e-4},
    {"delta", 0.72818479, 5.2e-07, 1e-6},
    {"gamma", 0.01427438, 1.0e-08, 1e-7},
    {"param:rho", 23.04336021, 1.6e-05, 1e-3},
};

struct CurvePin {
    const char* name;
    double bound; // l_inf bound at the pinned N = 2^22
};

const CurvePin kCurvePins[] = {
    {"call", 1.2e-06},   {"delta", 2.4e-06},  {"rho", 1.9e-06},
    {"vega", 9.5e-07},   {"theta", 1.2e-07},  {"gamma", 9.5e-06},
    {"vanna", 6.3e-06},  {"vomma", 7.5e-06},  {"charm", 6.8e-07},
    {"veta", 8.9e-07},   {"vera", 5.8e-06},   {"color", 5.6e-06},
    {"speed", 6.3e-05},  {"ultima", 1.2e-04}, {"zomma", 9.5e-05},
};

// Table evaluation ------------------------------------------------------------

cplx payoff_pole(cplx z) {
    const cplx iz(-z.imag(), z.real());
    return iz * (1.0 + iz);
}

/** Integrand reweighting of the named quantity relative to the exponent
 *  samples: the call's own 1/(iz(1+iz)), or a Greek kernel on top of it. */
std::function<cplx(cplx, cplx)> curve_multiplier(const PricingEngine& engine,
                                                 const std::string& name) {
    if (name == "call")
        return [](cplx z, cplx) { return 1.0 / payoff_pole(z); };
    const GreekKernel& kernel = greek_kernel(name);
    const KernelContext ctx{engine.market().S, engine.market().r,
                            engine.market().tau, engine.model().sigma()};
    return [ctx, mult = kernel.mult](cplx z, cplx psi_mz) {
        return mult(z, psi_mz, ctx) / payoff_pole(z);
    };
}

/** S e^x (1/2pi) int e^{izx} e^{tau psi(-z)} mult(z) dz at every x, by direct
 *  summation against one set of composed samples. Points are independent, so
 *  the parallel loop runs over x and each sum stays in evaluation order. */
std::vector<double> direct_curve(const PricingEngine& engine,
                                 const std::function<cplx(cplx, cplx)>& mult,
                                 const std::vector<double>& xs) {
    const QuadratureGrid& grid = engine.grid();
    const std::size_t n = grid.size();
    std::vector<cplx> samples(n);
    par::parallel_for(n, [&](std::size_t k) {
        samples[k] =
            grid.weight(k) * mult(grid.node(k), engine.psi_at(k)) * engine.exp_tpsi(k);
    });
    const double u0 = grid.node(0).real();
    const double h = grid.h();
    const double S = engine.market().S;
    const double v = grid.v();
    std::vector<double> out(xs.size());
    par::parallel_for(xs.size(), [&](std::size_t m) {
        const double x = xs[m];
        const cplx step = std::polar(1.0, h * x);
        cplx phase = 1.0;
        cplx acc{};
        for (std::size_t k = 0; k < n; ++k) {
            if (k % kPhaseChunk == 0)
                phase = std::polar(1.0, (u0 + static_cast<double>(k) * h) * x);
            acc += samples[k] * phase;
            phase *= step;
        }
        out[m] = S * std::exp((1.0 - v) * x) * h / kTwoPi * acc.real();
    });
    return out;
}

TableReport table_curve_errors(std::size_t n) {
    Timer timer;
    TableReport report;
    report.id = 1;
    report.title = "Black-Scholes call and Greek curves vs analytic values";
    const MarketState market = table_market(1);
    const ModelSpec model = table_model(1);
    PricingEngine engine(model, market, table_contour(1, n));
    report.setup = describe(engine);

    std::vector<double> xs(141);
    for (std::size_t m = 0; m < xs.size(); ++m)
        xs[m] = -0.7 + 0.01 * static_cast<double>(m);

    const bool pinned = n >= kPinnedN;
    for (const CurvePin& pin : kCurvePins) {
        const std::vector<double> curve =
            direct_curve(engine, curve_multiplier(engine, pin.name), xs);
        std::vector<double> exact(xs.size());
        const std::string oracle_name =
            pin.name == std::string("call") ? "price" : pin.name;
        for (std::size_t m = 0; m < xs.size(); ++m)
            exact[m] = oracle::bs_value(oracle_name, market.S,
                                        engine.strike_for(xs[m]), market.r,
                                        market.tau, model.sigma());
        const oracle::CurveError err = oracle::linf_error(curve, exact, xs);
        report.rows.push_back(
            bound_row(pin.name, err.linf, pinned ? pin.bound : 1e-4));
    }
    return finish(std::move(report), timer);
}

/** Row values of tables 2..5 in pin order, at grid size n. */
std::vector<double> table_values(int id, std::size_t n) {
    PricingEngine engine(table_model(id), table_market(id),
                         table_contour(id, n));
    std::vector<double> out;
    switch (id) {
        case 2: {
            const double strike = engine.strike_for(0.0);
            out.push_back(engine.call_value(0.0));
            for (const GreekKernel& kernel : greek_kernels())
                out.push_back(kernel_greek(engine, strike, kernel.name).value);
            break;
        }
        case 3: {
            const double strike = engine.strike_for(0.0);
            for (const ValuePin& pin : kJumpPins)
                out.push_back(param_sensitivity(
                    engine, strike, std::string(pin.name).substr(6)));
            break;
        }
        case 4: {
            // the pinned digital family is quoted at present value; the
            // engine quotes undiscounted exercise probabilities
            const DigitalGreeks dg = digital_greeks(engine, 100.0);
            const double disc =
                std::exp(-engine.market().r * engine.market().tau);
            out = {disc * dg.value, disc * dg.delta, disc * dg.gamma,
                   disc * dg.vega};
            break;
        }
        default: {
            const double x = engine.log_moneyness(100.0);
            out.push_back(engine.call_value(x));
            out.push_back(kernel_greek(engine, 100.0, "delta").value);
            out.push_back(kernel_greek(engine, 100.0, "gamma").value);
            out.push_back(param_sensitivity(engine, 100.0, "rho"));
            break;
        }
    }
    return out;
}

std::pair<const ValuePin*, std::size_t> table_pins(int id) {
    switch (id) {
        case 2: return {kAtmPins, std::size(kAtmPins)};
        case 3: return {kJumpPins, std::size(kJumpPins)};
        case 4: return {kDigitalPins, std::size(kDigitalPins)};
        default: return {kVgPins, std::size(kVgPins)};
    }
}

const char* table_title(int id) {
    switch (id) {
        case 2: return "Merton call and Greeks at x = 0";
        case 3: return "Merton jump-parameter sensitivities at x = 0";
        case 4: return "Merton digital option family (present value)";
        default: return "Variance gamma call, Delta, Gamma, rho-sensitivity";
    }
}

TableReport table_pinned_values(int id, std::size_t n) {
    Timer timer;
    TableReport report;
    report.id = id;
    report.title = table_title(id);
    {
        PricingEngine engine(table_model(id), table_market(id),
                             table_contour(id, n));
        report.setup = describe(engine);
    }
    const auto [pins, count] = table_pins(id);
    const std::vector<double> values = table_values(id, n);
    for (std::size_t i = 0; i < count; ++i)
        report.rows.push_back(value_row(pins[i].name, values[i],
                                        pins[i].reference, pins[i].tolerance));
    return finish(std::move(report), timer);
}

} // namespace

TableReport run_table(int id, std::size_t n_override) {
    require_table_id(id, 1, "run_table");
    const std::size_t n = n_override != 0 ? n_override : pinned_n(id);
    if (n < 16) throw ConfigError("run_table: N must be at least 16");
    if (id == 1) return table_curve_errors(n);
    return table_pinned_values(id, n);
}

TableReport run_refinement(int id) {
    require_table_id(id, 2, "run_refinement");
    Timer timer;
    TableReport report;
    report.id = id;
    report.title = std::string(table_title(id)) + ": grid refinement";
    const std::size_t fine = pinned_n(id);
    std::ostringstream os;
    os << "N=" << (fine >> 1) << " vs N=" << fine;
    report.setup = os.str();
    const std::vector<double> coarse = table_values(id, fine >> 1);
    const std::vector<double> refined = table_values(id, fine);
    const auto [pins, count] = table_pins(id);
    for (std::size_t i = 0; i < count; ++i)
        report.rows.push_back(bound_row(pins[i].name,
                                        std::fabs(refined[i] - coarse[i]),
                                        3.0 * pins[i].allowance));
    return finish(std::move(report), timer);
}

namespace {

// Invariant checklist ---------------------------------------------------------

struct Fixture {
    std::string label;
    ModelSpec model;
    double A;
    double v_call;
    double v_put;
    Rule rule;
};

constexpr std::size_t kPropertyN = std::size_t{1} << 14;

/** The VG integrands decay slowly, so that fixture needs a wide window; at
 *  N = 2^14 the step is then coarse and the discretization sums alias images
 *  spaced 2*pi/h apart. Keeping both contours 1.5 away from the payoff poles
 *  pushes those images below the parity tolerance, and the trapezoid's
 *  symmetric end weights let the integrand's odd part cancel out of the
 *  imaginary residual. */
std::vector<Fixture> property_fixtures() {
    return {{"bs", ModelSpec::black_scholes(0.1), 200.0, 1.5, -0.5,
             Rule::simpson},
            {"merton", ModelSpec::merton(0.1, -0.005, 0.1, 1.0), 200.0, 1.5,
             -0.5, Rule::simpson},
            {"vg", ModelSpec::variance_gamma(0.2, 1.0, -0.15), 3200.0, 2.5,
             -1.5, Rule::trapezoid}};
}

ModelSpec bumped_sigma(const ModelSpec& model, double bump) {
    const double sigma = model.sigma() + bump;
    if (model.kind() == ModelSpec::Kind::black_scholes)
        return ModelSpec::black_scholes(sigma);
    return ModelSpec::merton(sigma, model.param_value("muj"),
                             model.param_value("sigmaj"),
                             model.param_value("lambda"));
}

double call_at(const ModelSpec& model, const MarketState& market,
               const Fixture& fx, double strike) {
    PricingEngine engine(model, market,
                         ContourSpec{fx.v_call, fx.A, kPropertyN, fx.rule});
    return engine.call_value(engine.log_moneyness(strike));
}

/** log2 of the error ratio between steps h and h/2 of a central difference
 *  against the kernel value; 2 means clean second-order convergence. */
double fd_slope(const std::function<double(double)>& price_at_bump,
                double kernel_value, double h) {
    auto err = [&](double step) {
        const double fd =
            (price_at_bump(step) - price_at_bump(-step)) / (2.0 * step);
        return std::max(std::fabs(fd - kernel_value), 1e-300);
    };
    return std::log2(err(h) / err(0.5 * h));
}

} // namespace

TableReport property_report() {
    Timer timer;
    TableReport report;
    report.id = 0;
    report.title = "model invariants and convergence checks";
    report.setup =
        "S=1 r=0.05 tau=1, N=16384; bs/merton A=200 Simpson, vg A=3200 trapezoid";

    const MarketState market{1.0, 0.05, 1.0};
    const std::vector<double> xs = {-0.5, -0.2, 0.0, 0.25, 0.5};
    std::vector<double> wide(15);
    for (std::size_t m = 0; m < wide.size(); ++m)
        wide[m] = -0.7 + 0.1 * static_cast<double>(m);

    const auto call_mult = [](cplx z, cplx) { return 1.0 / payoff_pole(z); };
    const auto digital_mult = [](cplx z, cplx) {
        return -1.0 / cplx(-z.imag(), z.real());
    };

    for (const Fixture& fx : property_fixtures()) {
        PricingEngine engine(fx.model, market,
                             ContourSpec{fx.v_call, fx.A, kPropertyN, fx.rule});
        PricingEngine put_engine(
            fx.model, market, ContourSpec{fx.v_put, fx.A, kPropertyN, fx.rule});

        report.rows.push_back(bound_row("martingale " + fx.label,
                                        std::abs(fx.model.psi(cplx(0.0, -1.0))),
                                        1e-10));

        double residual = 0.0;
        double decomposition = 0.0;
        double parity = 0.0;
        for (double x : xs) {
            const PricingEngine::Bundle bundle = engine.base_bundle(x);
            if (fx.model.has_diffusion())
                residual = std::max(residual, bundle.imag_residual);
            residual = std::max(
                residual, engine.line_integral(x, call_mult).imag_residual);
            residual = std::max(
                residual, engine.line_integral(x, digital_mult).imag_residual);
            const double call = engine.call_value(x);
            decomposition = std::max(
                decomposition,
                std::fabs(call - market.S * (bundle.q_dual -
                                             std::exp(x) * bundle.q)));
            const double put =
                market.S * std::exp(x) *
                put_engine.line_integral(x, call_mult).value;
            parity = std::max(
                parity, std::fabs(put - (call - market.S +
                                         market.S * std::exp(x))));
        }
        report.rows.push_back(bound_row("tail decomposition " + fx.label,
                                        decomposition, 1e-9 * market.S));
        report.rows.push_back(bound_row("put-call parity " + fx.label, parity, 1e-10));

        std::vector<std::string> names;
        for (const GreekKernel& kernel : greek_kernels())
            names.push_back(kernel.name);
        const std::size_t expected_both =
            fx.model.has_diffusion() ? names.size() : 5;
        std::size_t both = names.size();
        double disagreement = 0.0;
        for (double x : {-0.2, 0.25}) {
            const std::vector<GreekRow> rows =
                greek_report(engine, engine.strike_for(x), names);
            std::size_t both_here = 0;
            for (const GreekRow& row : rows) {
                if (row.kernel_ok)
                    residual = std::max(residual, row.imag_residual);
                if (!(row.kernel_ok && row.closed_ok)) continue;
                ++both_here;
                disagreement = std::max(
                    row.discrepancy / (1.0 + std::fabs(row.closed_value)),
                    disagreement);
            }
            both = std::min(both, both_here);
        }
        report.rows.push_back(
            bound_row("imag residual " + fx.label, residual, 1e-9));
        report.rows.push_back(value_row("two-route coverage " + fx.label,
                                        static_cast<double>(both),
                                        static_cast<double>(expected_both),
                                        0.0));
        report.rows.push_back(
            bound_row("kernel vs closed " + fx.label, disagreement, 1e-8));

        // The probe sits away from x ~ 0.12, where the one-year VG density
        // has a kink (tau/nu = 1) and differences in S, r, or tau that
        // straddle it lose their order.
        const double strike = engine.strike_for(0.35);
        const auto greek = [&](const std::string& name) {
            return kernel_greek(engine, strike, name).value;
        };
        const auto slope_row = [&](const std::string& name, double slope) {
            TableRow row = value_row("fd slope " + name + " " + fx.label,
                                     slope, 2.0, 0.2);
            report.rows.push_back(row);
        };
        slope_row("delta", fd_slope(
                               [&](double b) {
                                   MarketState m = market;
                                   m.S += b;
                                   return call_at(fx.model, m, fx, strike);
                               },
                               greek("delta"), 0.02));
        slope_row("rho", fd_slope(
                             [&](double b) {
                                 MarketState m = market;
                                 m.r += b;
                                 return call_at(fx.model, m, fx, strike);
                             },
                             greek("rho"), 0.05));
        if (fx.model.has_diffusion())
            slope_row("vega", fd_slope(
                                  [&](double b) {
                                      return call_at(bumped_sigma(fx.model, b),
                                                     market, fx, strike);
                                  },
                                  greek("vega"), 0.01));
        slope_row("theta", fd_slope(
                               [&](double b) {
                                   MarketState m = market;
                                   m.tau += b;
                                   return call_at(fx.model, m, fx, strike);
                               },
                               greek("theta"), 0.05));

        double digital_excess = -1.0;
        double delta_excess = -1.0;
        for (double x : wide) {
            const double digital = engine.digital_value(x);
            digital_excess = std::max({digital_excess, -digital, digital - 1.0});
            const double delta = kernel_greek(engine, engine.strike_for(x),
                                              "delta").value;
            delta_excess = std::max({delta_excess, -delta, delta - 1.0});
        }
        report.rows.push_back(
            bound_row("digital in [0,1] " + fx.label, digital_excess, 0.0));
        report.rows.push_back(
            bound_row("delta in (0,1) " + fx.label, delta_excess, 0.0));

        if (fx.model.has_diffusion()) {
            const double h = 3e-6;
            const double tau = market.tau;
            const double sigma = fx.model.sigma();
            double worst = 0.0;
            PricingEngine up(bumped_sigma(fx.model, h), market,
                             ContourSpec{fx.v_call, fx.A, kPropertyN, fx.rule});
            PricingEngine down(
                bumped_sigma(fx.model, -h), market,
                ContourSpec{fx.v_call, fx.A, kPropertyN, fx.rule});
            for (double x : {-0.2, 0.05, 0.3}) {
                const double fd =
                    (up.density(x, 0) - down.density(x, 0)) / (2.0 * h);
                const double identity =
                    tau * sigma * (engine.density(x, 1) + engine.density(x, 2));
                worst = std::max(worst, std::fabs(fd - identity));
            }
            report.rows.push_back(
                bound_row("density vol identity " + fx.label, worst, 1e-6));
        }
    }
    return finish(std::move(report), timer);
}

TableReport fft_cross_check(int id, std::uint64_t seed) {
    require_table_id(id, 1, "fft_cross_check");
    Timer timer;
    TableReport report;
    report.id = id;
    report.title = std::string("batch FFT vs pointwise quadrature, table ") +
                   std::to_string(id);
    PricingEngine engine(table_model(id), table_market(id),
                         table_contour(id, pinned_n(id)));

    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(id));
    std::uniform_real_distribution<double> origin(-0.35, -0.05);
    const MoneynessGrid checkpoints =
        resonant_grid(engine.grid(), origin(rng), 16);

    const PayoffTransform payoff =
        id == 4 ? digital_transform(engine.strike_for(checkpoints.x0))
                : call_transform(engine.strike_for(checkpoints.x0));
    const std::vector<double> fft = engine.curve_fft(payoff, checkpoints);
    const std::vector<double> direct = engine.curve_direct(payoff, checkpoints);

    std::ostringstream os;
    os << describe(engine) << "; " << payoff.name << " checkpoints at x0="
       << checkpoints.x0 << " delta=" << checkpoints.delta;
    report.setup = os.str();

    double worst = 0.0;
    for (std::size_t m = 0; m < fft.size(); ++m)
        worst = std::max(worst,
                         std::fabs(fft[m] - direct[m]) / std::fabs(direct[m]));
    report.rows.push_back(bound_row("max relative deviation", worst, 1e-10));
    return finish(std::move(report), timer);
}

} // namespace levy
