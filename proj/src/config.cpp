#include "levy/config.hpp"

#include <cmath>
#include <exception>
#include <fstream>
#include <sstream>

#include "levy/errors.hpp"

namespace levy {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& where, const std::string& text) {
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected a number, got '" + text + "'");
    }
}

std::size_t parse_count(const std::string& where, const std::string& text) {
    try {
        if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument(text);
        const unsigned long long value = std::stoull(text);
        if (value == 0) throw std::invalid_argument(text);
        return static_cast<std::size_t>(value);
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected a positive integer, got '" + text +
                          "'");
    }
}

void assign(RunConfig& cfg, const std::string& where, const std::string& section,
            const std::string& key, const std::string& value) {
    if (section == "model") {
        if (key == "kind") cfg.model_kind = value;
        else if (key == "sigma") cfg.sigma = parse_double(where, value);
        else if (key == "muj") cfg.muj = parse_double(where, value);
        else if (key == "sigmaj") cfg.sigmaj = parse_double(where, value);
        else if (key == "lambda") cfg.lambda = parse_double(where, value);
        else if (key == "rho") cfg.rho = parse_double(where, value);
        else if (key == "nu") cfg.nu = parse_double(where, value);
        else if (key == "theta") cfg.theta = parse_double(where, value);
        else throw ConfigError(where + ": unknown key 'model." + key + "'");
        return;
    }
    if (section == "contour") {
        if (key == "v") cfg.v = parse_double(where, value);
        else if (key == "A") cfg.A = parse_double(where, value);
        else if (key == "N") cfg.N = parse_count(where, value);
        else if (key == "rule") cfg.rule = value;
        else if (key == "delta") cfg.delta = parse_double(where, value);
        else throw ConfigError(where + ": unknown key 'contour." + key + "'");
        return;
    }
    if (section == "market") {
        if (key == "S") cfg.S = parse_double(where, value);
        else if (key == "r") cfg.r = parse_double(where, value);
        else if (key == "tau") cfg.tau = parse_double(where, value);
        else if (key == "strike") {
            cfg.strike = parse_double(where, value);
            cfg.has_strike = true;
        } else if (key == "x") {
            cfg.x = parse_double(where, value);
            cfg.has_x = true;
        } else {
            throw ConfigError(where + ": unknown key 'market." + key + "'");
        }
        return;
    }
    if (section == "payoff") {
        if (key == "kind") cfg.payoff = value;
        else throw ConfigError(where + ": unknown key 'payoff." + key + "'");
        return;
    }
    throw ConfigError(where + ": unknown section '" + section + "'");
}

} // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = origin + ":" + std::to_string(lineno);
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(where + ": unterminated section header '" +
                                  line + "'");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected key=value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError(where + ": key '" + key +
                              "' appears before any [section] header");
        assign(cfg, where, section, key, value);
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str(), path);
}

void apply_override(RunConfig& cfg, const std::string& dotted_key,
                    const std::string& value) {
    const auto dot = dotted_key.find('.');
    if (dot == std::string::npos)
        throw ConfigError("override '" + dotted_key +
                          "': expected section.key form");
    assign(cfg, "override " + dotted_key, dotted_key.substr(0, dot),
           dotted_key.substr(dot + 1), value);
}

ModelSpec make_model(const RunConfig& cfg) {
    if (cfg.model_kind == "bs" || cfg.model_kind == "black_scholes")
        return ModelSpec::black_scholes(cfg.sigma);
    if (cfg.model_kind == "merton")
        return ModelSpec::merton(cfg.sigma, cfg.muj, cfg.sigmaj, cfg.lambda);
    if (cfg.model_kind == "vg" || cfg.model_kind == "variance_gamma")
        return ModelSpec::variance_gamma(cfg.rho, cfg.nu, cfg.theta);
    throw ConfigError("model.kind '" + cfg.model_kind +
                      "' is not one of bs, merton, vg");
}

MarketState make_market(const RunConfig& cfg) {
    return MarketState{cfg.S, cfg.r, cfg.tau};
}

ContourSpec make_contour(const RunConfig& cfg, const ModelSpec& model) {
    ContourSpec spec;
    if (cfg.rule == "simpson") spec.rule = Rule::simpson;
    else if (cfg.rule == "trapezoid") spec.rule = Rule::trapezoid;
    else
        throw ConfigError("contour.rule '" + cfg.rule +
                          "' is not one of simpson, trapezoid");
    spec.N = cfg.N;
    spec.v = cfg.v != 0.0 ? cfg.v : (cfg.payoff == "digital" ? 0.5 : 1.5);
    if (cfg.delta > 0.0) {
        const double n = static_cast<double>(cfg.N);
        spec.A = kTwoPi * (n - 1.0) / (n * cfg.delta);
    } else if (cfg.A > 0.0) {
        spec.A = cfg.A;
    } else {
        spec.A = suggest_truncation(model, spec.v, cfg.tau, 1e-10).A;
    }
    return spec;
}

namespace {

double target_strike(const RunConfig& cfg) {
    if (cfg.has_strike == cfg.has_x)
        throw ConfigError(cfg.has_strike
                              ? "market.strike and market.x are both set; "
                                "provide exactly one"
                              : "one of market.strike or market.x is required");
    if (cfg.has_strike) return cfg.strike;
    return cfg.S * std::exp(cfg.x + cfg.r * cfg.tau);
}

} // namespace

PayoffTransform make_payoff(const RunConfig& cfg) {
    if (cfg.payoff == "call") return call_transform(target_strike(cfg));
    if (cfg.payoff == "digital") return digital_transform(target_strike(cfg));
    if (cfg.payoff == "put")
        throw ConfigError(
            "puts are quoted via put-call parity from the call transform; "
            "only the CLI price command accepts payoff.kind=put");
    throw ConfigError("payoff.kind '" + cfg.payoff +
                      "' is not one of call, put, digital");
}

double target_x(const RunConfig& cfg) {
    if (cfg.has_strike == cfg.has_x)
        throw ConfigError(cfg.has_strike
                              ? "market.strike and market.x are both set; "
                                "provide exactly one"
                              : "one of market.strike or market.x is required");
    if (cfg.has_x) return cfg.x;
    if (!(cfg.strike > 0.0) || !(cfg.S > 0.0))
        throw ConfigError("market.strike and market.S must be positive");
    return std::log(cfg.strike / cfg.S) - cfg.r * cfg.tau;
}

} // namespace levy
