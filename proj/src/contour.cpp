#include "levy/contour.hpp"

#include <cmath>
#include <numbers>

#include "levy/errors.hpp"
#include "levy/fft.hpp"

namespace levy {

QuadratureGrid::QuadratureGrid(const ContourSpec& spec) : spec_(spec) {
    if (!(spec.A > 0.0)) throw ConfigError("contour: width A must be positive");
    if (spec.N < 2) throw ConfigError("contour: need at least two nodes");
    if (!std::isfinite(spec.v)) throw ConfigError("contour: v must be finite");
    h_ = spec.A / static_cast<double>(spec.N - 1);
}

double QuadratureGrid::weight(std::size_t k) const {
    const std::size_t n = spec_.N;
    if (spec_.rule == Rule::trapezoid || n == 2)
        return (k == 0 || k == n - 1) ? 0.5 : 1.0;
    if (n % 2 == 1) {
        if (k == 0 || k == n - 1) return 1.0 / 3.0;
        return (k % 2 == 1) ? 4.0 / 3.0 : 2.0 / 3.0;
    }
    // even node count: Simpson panels plus one trapezoid panel at the end
    if (k == 0) return 1.0 / 3.0;
    if (k == n - 1) return 0.5;
    if (k == n - 2) return 5.0 / 6.0;
    return (k % 2 == 1) ? 4.0 / 3.0 : 2.0 / 3.0;
}

QuadratureGrid build_grid(const ContourSpec& spec) { return QuadratureGrid(spec); }

MoneynessGrid resonant_grid(const QuadratureGrid& grid, double x0,
                            std::size_t count) {
    if (count == 0 || count > grid.size())
        throw ConfigError("moneyness grid: count must be in 1..N");
    MoneynessGrid xs;
    xs.x0 = x0;
    xs.delta = (2.0 * std::numbers::pi / static_cast<double>(grid.size())) / grid.h();
    xs.count = count;
    return xs;
}

std::vector<cplx> batch_evaluate(const QuadratureGrid& grid,
                                 const std::vector<cplx>& samples,
                                 const MoneynessGrid& xs, bool serial) {
    const std::size_t n = grid.size();
    if (samples.size() != n)
        throw ConfigError("batch_evaluate: need one sample per contour node");
    if (!fft::is_pow2(n))
        throw ConfigError("batch_evaluate: N must be a power of two");
    if (xs.count == 0 || xs.count > n)
        throw ConfigError("batch_evaluate: moneyness count must be in 1..N");
    const double bin = 2.0 * std::numbers::pi / static_cast<double>(n);
    if (!(std::abs(xs.delta * grid.h() - bin) <= 1e-15 * bin))
        throw ConfigError("batch_evaluate: moneyness spacing is not resonant "
                          "with the quadrature (delta * h != 2 pi / N)");

    // buf[k] = w_k g_k e^{i k h x0}; the phase advances by recurrence inside
    // short chunks, re-anchored from the exact angle at each chunk start
    std::vector<cplx> buf(n);
    const double step_angle = grid.h() * xs.x0;
    const cplx step = std::polar(1.0, step_angle);
    constexpr std::size_t kChunk = 256;
    const std::size_t nchunks = (n + kChunk - 1) / kChunk;
    const auto fill_chunk = [&](std::size_t c) {
        const std::size_t lo = c * kChunk;
        const std::size_t hi = std::min(n, lo + kChunk);
        cplx phase = std::polar(1.0, static_cast<double>(lo) * step_angle);
        for (std::size_t k = lo; k < hi; ++k) {
            buf[k] = grid.weight(k) * samples[k] * phase;
            phase *= step;
        }
    };
    if (serial) {
        for (std::size_t c = 0; c < nchunks; ++c) fill_chunk(c);
        fft::transform_serial(buf, +1);
    } else {
        par::parallel_for(nchunks, fill_chunk);
        fft::transform(buf, +1);
    }

    std::vector<cplx> out(xs.count);
    const double half_a = 0.5 * grid.spec().A;
    const auto finish = [&](std::size_t m) {
        const double x = xs.x0 + static_cast<double>(m) * xs.delta;
        out[m] = grid.h() * std::exp(-grid.v() * x) *
                 std::polar(1.0, -half_a * x) * buf[m];
    };
    if (serial) {
        for (std::size_t m = 0; m < xs.count; ++m) finish(m);
    } else {
        par::parallel_for(xs.count, finish);
    }
    return out;
}

TruncationSuggestion suggest_truncation(const ModelSpec& model, double v,
                                        double tau, double tol) {
    if (!(tau > 0.0)) throw ConfigError("suggest_truncation: tau must be positive");
    if (!(tol > 0.0) || tol >= 1.0)
        throw ConfigError("suggest_truncation: tol must be in (0, 1)");
    if (!model.strip_contains(-v))
        throw DomainError("suggest_truncation: contour Im z = " +
                          std::to_string(v) +
                          " lies outside the analyticity strip of '" +
                          model.name() + "'");
    TruncationSuggestion s;
    for (int j = 0; j <= 11; ++j) {
        const double a = 100.0 * static_cast<double>(1 << j);
        const cplx z(0.5 * a, v);
        const double mag = std::exp(tau * model.psi(-z).real());
        s.A = a;
        if (mag / std::abs(z) < tol) return s;
    }
    s.capped = true;
    s.note = "no width up to " + std::to_string(static_cast<long>(s.A)) +
             " meets the tolerance: the exponent's real part stays bounded on "
             "the contour, so the integrand decays only like 1/|z|";
    return s;
}

} // namespace levy
