#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "levy/model.hpp"
#include "levy/parallel.hpp"
#include "levy/types.hpp"

namespace levy {

enum class Rule { trapezoid, simpson };

/** Horizontal integration contour Im z = v, truncated to Re z in [-A/2, A/2]
 *  and discretized with N nodes. */
struct ContourSpec {
    double v = 1.5;
    double A = 0.0;
    std::size_t N = 0;
    Rule rule = Rule::simpson;
};

/** Nodes z_k = -A/2 + k h + iv, k = 0..N-1, h = A/(N-1), with composite
 *  closed weights (trapezoid, or Simpson; an even node count closes the last
 *  panel with a trapezoid step). Weights sum to N-1 so constants integrate
 *  exactly: h * sum w_k = A. */
class QuadratureGrid {
public:
    explicit QuadratureGrid(const ContourSpec& spec);

    const ContourSpec& spec() const { return spec_; }
    std::size_t size() const { return spec_.N; }
    double h() const { return h_; }
    double v() const { return spec_.v; }

    cplx node(std::size_t k) const {
        return {-0.5 * spec_.A + static_cast<double>(k) * h_, spec_.v};
    }
    double weight(std::size_t k) const;

private:
    ContourSpec spec_;
    double h_ = 0.0;
};

QuadratureGrid build_grid(const ContourSpec& spec);

/** h * sum_k w_k f(z_k), the truncated contour integral of f without the
 *  1/(2 pi) prefactor. Deterministic for any thread count. */
template <class F>
cplx integrate(const QuadratureGrid& grid, F&& f) {
    const cplx s = par::block_sum(grid.size(), [&](std::size_t k) {
        return grid.weight(k) * f(grid.node(k));
    });
    return grid.h() * s;
}

template <class F>
cplx integrate_serial(const QuadratureGrid& grid, F&& f) {
    const cplx s = par::block_sum_serial(grid.size(), [&](std::size_t k) {
        return grid.weight(k) * f(grid.node(k));
    });
    return grid.h() * s;
}

/** Log-moneyness targets x_m = x0 + m delta, m = 0..count-1, tuned so that
 *  delta * h = 2 pi / N and the batch transform reduces to one FFT. */
struct MoneynessGrid {
    double x0 = 0.0;
    double delta = 0.0;
    std::size_t count = 0;
};

/** Grid resonant with the quadrature spacing: delta = (2 pi / N) / h. */
MoneynessGrid resonant_grid(const QuadratureGrid& grid, double x0,
                            std::size_t count);

/** Evaluates F(x_m) = h * sum_k w_k g(z_k) e^{i z_k x_m} for all m at once via
 *  one length-N FFT. g is passed as its samples g_k = g(z_k); N must be a
 *  power of two and the moneyness grid resonant with the quadrature. The
 *  serial flag routes the FFT through its serial reference implementation. */
std::vector<cplx> batch_evaluate(const QuadratureGrid& grid,
                                 const std::vector<cplx>& samples,
                                 const MoneynessGrid& xs, bool serial = false);

struct TruncationSuggestion {
    double A = 0.0;
    bool capped = false;   // no width in the search range met the target
    std::string note;
};

/** Smallest A from {100 * 2^j} with |e^{tau psi(-z)}| / |z| < tol at the
 *  truncation point z = A/2 + iv. Models whose integrand decays only through
 *  the 1/|z| payoff factor get the largest candidate and a warning note. */
TruncationSuggestion suggest_truncation(const ModelSpec& model, double v,
                                        double tau, double tol);

} // namespace levy
