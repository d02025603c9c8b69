#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <new>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "levy/config.hpp"
#include "levy/contour.hpp"
#include "levy/errors.hpp"
#include "levy/greeks.hpp"
#include "levy/pricer.hpp"
#include "levy/tables.hpp"
#include "levy/transforms.hpp"

namespace {

using namespace levy;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitConfig = 2;
constexpr int kExitDomain = 3;
constexpr int kExitAcceptance = 4;

std::string num17(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    for (char c : text) {
        if (c == ',') {
            if (!item.empty()) out.push_back(item);
            item.clear();
        } else {
            item += c;
        }
    }
    if (!item.empty()) out.push_back(item);
    return out;
}

cplx call_multiplier(cplx z, cplx) {
    const cplx iz(-z.imag(), z.real());
    return 1.0 / (iz * (1.0 + iz));
}

cplx digital_multiplier(cplx z, cplx) {
    return -1.0 / cplx(-z.imag(), z.real());
}

bool maturity_direction(const std::string& name) {
    return name == "theta" || name == "charm" || name == "veta" ||
           name == "color";
}

/** Everything parsed from the command line; option presence is tracked so
 *  that flags override config-file values only when actually given. */
struct CliArgs {
    std::string config_path;
    std::vector<std::string> overrides; // section.key=value assignments

    std::string model;
    double contour_v = 0.0;
    double A = 0.0;
    std::size_t N = 0;
    std::string rule;
    std::string payoff;
    double S = 0.0;
    double r = 0.0;
    double tau = 0.0;
    double strike = 0.0;
    double x = 0.0;

    std::string greeks;
    std::string path = "both";
    std::string theta_convention = "tau";
    std::string output = "csv";
    std::string out_path;

    double x_min = -0.7;
    double x_max = 0.7;
    std::size_t n_points = 141;
    int table_id = 0;

    CLI::Option* model_opt = nullptr;
    CLI::Option* v_opt = nullptr;
    CLI::Option* a_opt = nullptr;
    CLI::Option* n_opt = nullptr;
    CLI::Option* rule_opt = nullptr;
    CLI::Option* payoff_opt = nullptr;
    CLI::Option* s_opt = nullptr;
    CLI::Option* r_opt = nullptr;
    CLI::Option* tau_opt = nullptr;
    CLI::Option* strike_opt = nullptr;
    CLI::Option* x_opt = nullptr;
};

/** Config file first, then dotted --set assignments, then named flags. */
RunConfig resolve_config(const CliArgs& args) {
    RunConfig cfg;
    if (!args.config_path.empty()) cfg = parse_config_file(args.config_path);
    for (const std::string& assignment : args.overrides) {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set expects section.key=value, got '" +
                              assignment + "'");
        apply_override(cfg, assignment.substr(0, eq),
                       assignment.substr(eq + 1));
    }
    if (args.model_opt->count()) cfg.model_kind = args.model;
    if (args.v_opt->count()) cfg.v = args.contour_v;
    if (args.a_opt->count()) cfg.A = args.A;
    if (args.n_opt->count()) cfg.N = args.N;
    if (args.rule_opt->count()) cfg.rule = args.rule;
    if (args.payoff_opt->count()) cfg.payoff = args.payoff;
    if (args.s_opt->count()) cfg.S = args.S;
    if (args.r_opt->count()) cfg.r = args.r;
    if (args.tau_opt->count()) cfg.tau = args.tau;
    if (args.strike_opt->count()) {
        cfg.strike = args.strike;
        cfg.has_strike = true;
        cfg.has_x = false;
    }
    if (args.x_opt->count()) {
        cfg.x = args.x;
        cfg.has_x = true;
        cfg.has_strike = false;
    }
    return cfg;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file)
        throw ConfigError("cannot open output file '" + out_path + "'");
    file << text;
}

ordered_json report_json(const TableReport& report) {
    ordered_json rows = ordered_json::array();
    for (const TableRow& row : report.rows)
        rows.push_back({{"name", row.name},
                        {"computed", row.computed},
                        {"reference", row.reference},
                        {"deviation", row.deviation},
                        {"tolerance", row.tolerance},
                        {"pass", row.pass}});
    return {{"id", report.id},
            {"title", report.title},
            {"setup", report.setup},
            {"pass", report.pass},
            {"rows", rows}};
}

std::string report_csv_rows(const TableReport& report,
                            const std::string& label) {
    std::string out;
    for (const TableRow& row : report.rows) {
        if (!label.empty()) out += label + ",";
        out += row.name + "," + num17(row.computed) + "," +
               num17(row.reference) + "," + num17(row.deviation) + "," +
               num17(row.tolerance) + "," + (row.pass ? "1" : "0") + "\n";
    }
    return out;
}

void report_summary_stderr(const TableReport& report) {
    std::fprintf(stderr, "%s [%s] %.2fs %s\n", report.title.c_str(),
                 report.setup.c_str(), report.elapsed_seconds,
                 report.pass ? "PASS" : "FAIL");
}

int cmd_price(const CliArgs& args) {
    const RunConfig cfg = resolve_config(args);
    const ModelSpec model = make_model(cfg);
    const MarketState market = make_market(cfg);
    const PricingEngine engine(model, market, make_contour(cfg, model));
    const double x = target_x(cfg);

    double value = 0.0;
    double residual = 0.0;
    if (cfg.payoff == "call" || cfg.payoff == "put") {
        value = engine.call_value(x);
        residual = market.S * std::exp(x) *
                   engine.line_integral(x, call_multiplier).imag_residual;
        if (cfg.payoff == "put")
            value = put_price_via_parity(value, market.S, engine.strike_for(x),
                                         market.r, market.tau);
    } else if (cfg.payoff == "digital") {
        value = engine.digital_value(x);
        residual = engine.line_integral(x, digital_multiplier).imag_residual;
    } else {
        throw ConfigError("payoff.kind '" + cfg.payoff +
                          "' is not one of call, put, digital");
    }

    if (args.output == "json") {
        const ordered_json j = {{"price", value}, {"imag_residual", residual}};
        emit(j.dump() + "\n", args.out_path);
    } else {
        emit("quantity,value\nprice," + num17(value) + "\nimag_residual," +
                 num17(residual) + "\n",
             args.out_path);
    }
    return 0;
}

int cmd_greeks(const CliArgs& args) {
    if (args.path != "kernel" && args.path != "closed" && args.path != "both")
        throw ConfigError("--path '" + args.path +
                          "' is not one of kernel, closed, both");
    const RunConfig cfg = resolve_config(args);
    const ModelSpec model = make_model(cfg);
    const MarketState market = make_market(cfg);
    const PricingEngine engine(model, market, make_contour(cfg, model));
    const double strike = engine.strike_for(target_x(cfg));

    std::vector<std::string> names;
    if (args.greeks.empty() || args.greeks == "all") {
        for (const GreekKernel& kernel : greek_kernels())
            names.push_back(kernel.name);
    } else {
        names = split_list(args.greeks);
    }

    const bool calendar = args.theta_convention == "calendar";
    const auto oriented = [&](const std::string& name, double value) {
        return calendar && maturity_direction(name) ? -value : value;
    };

    const bool want_kernel = args.path != "closed";
    const bool want_closed = args.path != "kernel";
    const std::vector<GreekRow> rows = greek_report(engine, strike, names);

    std::string csv = "greek,value,path,discrepancy\n";
    ordered_json jrows = ordered_json::array();
    std::vector<std::string> missing;
    for (const GreekRow& row : rows) {
        const bool both = row.kernel_ok && row.closed_ok;
        const std::string disc = both ? num17(row.discrepancy) : "";
        if (want_kernel && row.kernel_ok) {
            const double value = oriented(row.name, row.kernel_value);
            csv += row.name + "," + num17(value) + ",kernel," + disc + "\n";
            ordered_json j = {{"greek", row.name},
                              {"path", "kernel"},
                              {"value", value}};
            if (both) j["discrepancy"] = row.discrepancy;
            jrows.push_back(j);
        }
        if (want_closed && row.closed_ok) {
            const double value = oriented(row.name, row.closed_value);
            csv += row.name + "," + num17(value) + ",closed," + disc + "\n";
            ordered_json j = {{"greek", row.name},
                              {"path", "closed"},
                              {"value", value}};
            if (both) j["discrepancy"] = row.discrepancy;
            jrows.push_back(j);
        }
        const bool satisfied = (want_kernel && row.kernel_ok) ||
                               (want_closed && row.closed_ok);
        if (!satisfied)
            missing.push_back(row.name + ": " + (row.note.empty()
                                                     ? "no route available"
                                                     : row.note));
    }

    emit(args.output == "json" ? ordered_json(jrows).dump() + "\n" : csv,
         args.out_path);
    if (!missing.empty()) {
        for (const std::string& m : missing)
            std::cerr << "levygreeks: " << m << "\n";
        return kExitDomain;
    }
    return 0;
}

int cmd_curve(const CliArgs& args) {
    if (!(args.x_max >= args.x_min))
        throw ConfigError("--x-max must be at least --x-min");
    if (args.n_points == 0)
        throw ConfigError("--n-points must be positive");
    const std::size_t n = args.n_points;
    const double spacing =
        n > 1 ? (args.x_max - args.x_min) / static_cast<double>(n - 1) : 0.0;

    std::vector<std::string> quantities;
    if (args.greeks.empty()) {
        quantities = {"price"};
    } else if (args.greeks == "all") {
        quantities = {"price"};
        for (const GreekKernel& kernel : greek_kernels())
            quantities.push_back(kernel.name);
    } else {
        quantities = split_list(args.greeks);
    }

    RunConfig cfg = resolve_config(args);
    const bool wants_price =
        std::find(quantities.begin(), quantities.end(), "price") !=
        quantities.end();
    // Batch pricing is one FFT when the moneyness spacing resonates with the
    // quadrature step, which make_contour arranges by adjusting A to delta.
    const bool batch = wants_price && n > 32 && spacing > 0.0;
    if (batch) cfg.delta = spacing;

    const ModelSpec model = make_model(cfg);
    const MarketState market = make_market(cfg);
    const PricingEngine engine(model, market, make_contour(cfg, model));
    const MoneynessGrid xs = batch
                                 ? resonant_grid(engine.grid(), args.x_min, n)
                                 : MoneynessGrid{args.x_min, spacing, n};
    const auto x_at = [&](std::size_t m) {
        return xs.x0 + static_cast<double>(m) * xs.delta;
    };

    const bool calendar = args.theta_convention == "calendar";
    const auto price_curve = [&]() -> std::vector<double> {
        const bool digital = cfg.payoff == "digital";
        if (cfg.payoff != "call" && cfg.payoff != "put" && !digital)
            throw ConfigError("payoff.kind '" + cfg.payoff +
                              "' is not one of call, put, digital");
        const PayoffTransform transform = digital
                                              ? digital_transform(market.S)
                                              : call_transform(market.S);
        std::vector<double> values = batch ? engine.curve_fft(transform, xs)
                                           : engine.curve_direct(transform, xs);
        if (cfg.payoff == "put")
            for (std::size_t m = 0; m < values.size(); ++m)
                values[m] += market.S * (std::exp(x_at(m)) - 1.0);
        return values;
    };

    const auto greek_curve = [&](const std::string& name) {
        std::vector<double> values(xs.count);
        if (cfg.payoff == "call") {
            for (std::size_t m = 0; m < xs.count; ++m)
                values[m] =
                    kernel_greek(engine, engine.strike_for(x_at(m)), name)
                        .value;
        } else if (cfg.payoff == "digital") {
            if (name != "delta" && name != "gamma" && name != "vega")
                throw ConfigError(
                    "digital curves cover delta, gamma and vega; '" + name +
                    "' is not available");
            for (std::size_t m = 0; m < xs.count; ++m) {
                const DigitalGreeks dg =
                    digital_greeks(engine, engine.strike_for(x_at(m)));
                if (name == "vega" && !dg.vega_defined)
                    throw ConfigError("the digital vega needs a diffusion "
                                      "volatility; the model has none");
                values[m] = name == "delta" ? dg.delta
                            : name == "gamma" ? dg.gamma
                                              : dg.vega;
            }
        } else {
            throw ConfigError(
                "greek curves are quoted for call and digital payoffs");
        }
        if (calendar && maturity_direction(name))
            for (double& v : values) v = -v;
        return values;
    };

    std::string csv = "x,quantity,value\n";
    ordered_json jrows = ordered_json::array();
    for (const std::string& quantity : quantities) {
        const std::vector<double> values =
            quantity == "price" ? price_curve() : greek_curve(quantity);
        for (std::size_t m = 0; m < values.size(); ++m) {
            csv += num17(x_at(m)) + "," + quantity + "," + num17(values[m]) +
                   "\n";
            jrows.push_back({{"x", x_at(m)},
                             {"quantity", quantity},
                             {"value", values[m]}});
        }
    }
    emit(args.output == "json" ? ordered_json(jrows).dump() + "\n" : csv,
         args.out_path);
    return 0;
}

int cmd_table(const CliArgs& args) {
    const std::size_t n_override = args.n_opt->count() ? args.N : 0;
    const TableReport report = run_table(args.table_id, n_override);
    report_summary_stderr(report);
    if (args.output == "json") {
        emit(report_json(report).dump() + "\n", args.out_path);
    } else {
        emit("name,computed,reference,deviation,tolerance,pass\n" +
                 report_csv_rows(report, ""),
             args.out_path);
    }
    return report.pass ? 0 : kExitAcceptance;
}

int cmd_validate(const CliArgs& args) {
    constexpr std::size_t kFastN = std::size_t{1} << 16;
    const std::size_t n = args.n_opt->count() ? args.N : kFastN;
    const TableReport invariants = property_report();
    const TableReport curves = run_table(1, n);
    report_summary_stderr(invariants);
    report_summary_stderr(curves);
    if (args.output == "json") {
        const ordered_json j = {{"invariants", report_json(invariants)},
                                {"curve_errors", report_json(curves)},
                                {"pass", invariants.pass && curves.pass}};
        emit(j.dump() + "\n", args.out_path);
    } else {
        emit("report,name,computed,reference,deviation,tolerance,pass\n" +
                 report_csv_rows(invariants, "invariants") +
                 report_csv_rows(curves, "curve_errors"),
             args.out_path);
    }
    return invariants.pass && curves.pass ? 0 : kExitAcceptance;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"European option prices and Greeks for exponential Levy "
                 "models, computed from contour integrals of the "
                 "characteristic exponent"};
    app.require_subcommand(1);

    CliArgs args;
    app.add_option("--config", args.config_path,
                   "Config file ([model]/[contour]/[market]/[payoff] "
                   "key=value sections)");
    app.add_option("--set", args.overrides,
                   "Override one config key as section.key=value (repeatable)");
    args.model_opt =
        app.add_option("--model", args.model, "Model kind: bs, merton, vg");
    args.v_opt = app.add_option("--contour-v", args.contour_v,
                                "Contour shift Im z (default per payoff)");
    args.a_opt = app.add_option("--A", args.A, "Truncation width");
    args.n_opt = app.add_option("--N", args.N, "Quadrature node count");
    args.rule_opt = app.add_option("--rule", args.rule,
                                   "Quadrature rule: simpson, trapezoid");
    args.payoff_opt = app.add_option("--payoff", args.payoff,
                                     "Payoff kind: call, put, digital");
    args.s_opt = app.add_option("--S", args.S, "Spot");
    args.r_opt = app.add_option("--r", args.r, "Risk-free rate");
    args.tau_opt = app.add_option("--tau", args.tau, "Time to maturity");
    args.strike_opt = app.add_option("--strike", args.strike, "Strike");
    args.x_opt = app.add_option(
        "--x", args.x, "Log-forward-moneyness ln(K/S) - r tau");
    args.strike_opt->excludes(args.x_opt);
    args.x_opt->excludes(args.strike_opt);
    app.add_option("--greeks", args.greeks,
                   "Comma list of greeks (or param:<name>), or 'all'");
    app.add_option("--path", args.path,
                   "Greek evaluation route: kernel, closed, both");
    app.add_option("--theta-convention", args.theta_convention,
                   "tau (d/dtau, default) or calendar (-d/dtau)")
        ->check(CLI::IsMember({"tau", "calendar"}));
    app.add_option("--output", args.output, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", args.out_path, "Write output to a file");

    CLI::App* price =
        app.add_subcommand("price", "Single option value plus the imaginary "
                                    "residual of its contour integral");
    CLI::App* greeks = app.add_subcommand(
        "greeks", "Sensitivities at one strike through the kernel and "
                  "closed-form routes");
    CLI::App* curve = app.add_subcommand(
        "curve", "Value or greek curves over a log-moneyness grid; batches "
                 "through one FFT when the grid is large");
    curve->add_option("--x-min", args.x_min, "Curve start (default -0.7)");
    curve->add_option("--x-max", args.x_max, "Curve end (default 0.7)");
    curve->add_option("--n-points", args.n_points,
                      "Grid size (default 141; FFT batch above 32)");
    CLI::App* table = app.add_subcommand(
        "table", "Recompute one pinned validation table (1..5); --N overrides "
                 "the pinned grid size");
    table->add_option("id", args.table_id, "Table number")
        ->required()
        ->check(CLI::Range(1, 5));
    CLI::App* validate = app.add_subcommand(
        "validate", "Invariant checklist plus the analytic-oracle curve "
                    "report (N defaults to 65536 here)");
    for (CLI::App* sub : {price, greeks, curve, table, validate})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (price->parsed()) return cmd_price(args);
        if (greeks->parsed()) return cmd_greeks(args);
        if (curve->parsed()) return cmd_curve(args);
        if (table->parsed()) return cmd_table(args);
        if (validate->parsed()) return cmd_validate(args);
        throw ConfigError("no command given");
    } catch (const ConfigError& e) {
        std::cerr << "levygreeks: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DomainError& e) {
        std::cerr << "levygreeks: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::bad_alloc&) {
        std::cerr << "levygreeks: out of memory building the quadrature "
                     "grid; retry with a smaller node count (e.g. --N "
                     "1048576)\n";
        return kExitDomain;
    }
}
