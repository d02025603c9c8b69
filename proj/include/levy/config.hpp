#pragma once

#include <cstddef>
#include <string>

#include "levy/contour.hpp"
#include "levy/model.hpp"
#include "levy/pricer.hpp"
#include "levy/transforms.hpp"

namespace levy {

/** One run description, assembled from an INI-style config file
 *  ([model]/[contour]/[market]/[payoff] sections of key=value lines) plus
 *  dotted overrides such as "contour.N=65536"; overrides win. */
struct RunConfig {
    // [model]
    std::string model_kind = "bs";
    double sigma = 0.2;   // diffusion volatility (bs, merton)
    double muj = 0.0;     // jump mean (merton)
    double sigmaj = 0.0;  // jump standard deviation (merton)
    double lambda = 0.0;  // jump intensity (merton)
    double rho = 0.0;     // subordinated volatility (vg)
    double nu = 0.0;      // subordinator variance rate (vg)
    double theta = 0.0;   // subordinated drift (vg)

    // [contour]
    double v = 0.0;  // contour shift; 0 = payoff default (1.5 call/put, 0.5 digital)
    double A = 0.0;  // truncation width; 0 = decay-based suggestion
    std::size_t N = std::size_t{1} << 14;
    std::string rule = "simpson";
    double delta = 0.0;  // > 0 pins the batch spacing by adjusting A

    // [market]
    double S = 1.0;
    double r = 0.0;
    double tau = 1.0;
    bool has_strike = false;
    double strike = 0.0;
    bool has_x = false;
    double x = 0.0;  // log-forward-moneyness ln(K/S) - r tau

    // [payoff]
    std::string payoff = "call";
};

/** Parses a config file. Unknown sections or keys, malformed lines and
 *  unparsable numbers raise ConfigError naming the offending line. */
RunConfig parse_config_file(const std::string& path);

RunConfig parse_config_text(const std::string& text,
                            const std::string& origin = "<config>");

/** Applies one "section.key=value" assignment on top of an existing config. */
void apply_override(RunConfig& cfg, const std::string& dotted_key,
                    const std::string& value);

ModelSpec make_model(const RunConfig& cfg);

MarketState make_market(const RunConfig& cfg);

/** Resolves contour defaults against the model and payoff: v from the payoff
 *  kind when unset, A from the decay-based suggestion when unset or from
 *  delta when a batch spacing is pinned (A = 2pi(N-1)/(N delta)). */
ContourSpec make_contour(const RunConfig& cfg, const ModelSpec& model);

/** Call or digital transform at the configured strike. Puts are quoted via
 *  parity from the call, so they have no transform of their own. */
PayoffTransform make_payoff(const RunConfig& cfg);

/** The configured evaluation point: x itself, or ln(strike/S) - r tau.
 *  Exactly one of market.strike / market.x must be set. */
double target_x(const RunConfig& cfg);

} // namespace levy
