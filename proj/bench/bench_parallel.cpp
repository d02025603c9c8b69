// Timing comparison between the OpenMP execution path and the serial
// reference implementation on the hot kernels: pointwise line integrals,
// the fused Greek bundle, the batch curve, and the raw transform. Both
// paths share their block structure and combine order, so the value
// column differences must be exactly zero.
//
// Usage: bench_parallel [log2-node-count]   (default 19)

#include <levy/config.hpp>
#include <levy/fft.hpp>
#include <levy/model.hpp>
#include <levy/parallel.hpp>
#include <levy/pricer.hpp>
#include <levy/transforms.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace levy;

namespace {

double g_sink = 0.0;

template <class F>
double best_seconds(int reps, F&& fn) {
    double best = 1e300;
    for (int rep = 0; rep < reps; ++rep) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const std::chrono::duration<double> dt =
            std::chrono::steady_clock::now() - t0;
        best = std::min(best, dt.count());
    }
    return best;
}

void row(const char* name, double serial_s, double openmp_s, double diff) {
    std::printf("%-24s %10.2f ms %10.2f ms %7.2fx %10.2e\n", name,
                serial_s * 1e3, openmp_s * 1e3, serial_s / openmp_s, diff);
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        worst = std::max(worst, std::fabs(a[k] - b[k]));
    return worst;
}

} // namespace

int main(int argc, char** argv) {
    const int log2n = argc > 1 ? std::atoi(argv[1]) : 19;
    if (log2n < 8 || log2n > 24) {
        std::fprintf(stderr, "bench_parallel: log2 node count must be in [8, 24]\n");
        return 2;
    }
    const std::size_t n = std::size_t{1} << log2n;

    RunConfig cfg;
    cfg.model_kind = "merton";
    cfg.sigma = 0.1;
    cfg.muj = -0.005;
    cfg.sigmaj = 0.1;
    cfg.lambda = 1.0;
    cfg.N = n;
    cfg.delta = 0.01;
    cfg.r = 0.05;
    const ModelSpec model = make_model(cfg);
    const MarketState market = make_market(cfg);
    PricingEngine engine(model, market, make_contour(cfg, model));

    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    std::printf("merton line integrals, N = 2^%d = %zu nodes, %d thread(s)\n\n",
                log2n, n, threads);
    std::printf("%-24s %13s %13s %8s %10s\n", "kernel", "serial", "openmp",
                "speedup", "max |diff|");

    const auto call_mult = [](cplx z, cplx) {
        const cplx iz(-z.imag(), z.real());
        return 1.0 / (iz * (1.0 + iz));
    };
    const double x = -0.05;

    {
        engine.set_serial(true);
        const double serial_value = engine.line_integral(x, call_mult).value;
        const double serial_s = best_seconds(
            5, [&] { g_sink += engine.line_integral(x, call_mult).value; });
        engine.set_serial(false);
        const double openmp_value = engine.line_integral(x, call_mult).value;
        const double openmp_s = best_seconds(
            5, [&] { g_sink += engine.line_integral(x, call_mult).value; });
        row("line integral", serial_s, openmp_s,
            std::fabs(serial_value - openmp_value));
    }

    {
        engine.set_serial(true);
        const PricingEngine::Bundle serial_b = engine.base_bundle(x);
        const double serial_s =
            best_seconds(5, [&] { g_sink += engine.base_bundle(x).q; });
        engine.set_serial(false);
        const PricingEngine::Bundle openmp_b = engine.base_bundle(x);
        const double openmp_s =
            best_seconds(5, [&] { g_sink += engine.base_bundle(x).q; });
        double diff = std::fabs(serial_b.q - openmp_b.q);
        for (int k = 0; k < 5; ++k)
            diff = std::max(diff, std::fabs(serial_b.f[k] - openmp_b.f[k]));
        diff = std::max(diff, std::fabs(serial_b.psi_w - openmp_b.psi_w));
        row("greek bundle", serial_s, openmp_s, diff);
    }

    {
        const PayoffTransform payoff = call_transform(market.S);
        const MoneynessGrid xs = resonant_grid(engine.grid(), -0.7, 141);
        engine.set_serial(true);
        const std::vector<double> serial_curve = engine.curve_fft(payoff, xs);
        const double serial_s = best_seconds(
            3, [&] { g_sink += engine.curve_fft(payoff, xs)[0]; });
        engine.set_serial(false);
        const std::vector<double> openmp_curve = engine.curve_fft(payoff, xs);
        const double openmp_s = best_seconds(
            3, [&] { g_sink += engine.curve_fft(payoff, xs)[0]; });
        row("batch curve, one fft", serial_s, openmp_s,
            max_abs_diff(serial_curve, openmp_curve));
    }

    {
        std::vector<cplx> seed(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double t = static_cast<double>(k) / static_cast<double>(n);
            seed[k] = cplx(std::cos(12.9898 * t), std::sin(78.233 * t));
        }
        std::vector<cplx> a = seed;
        fft::transform_serial(a, 1);
        const std::vector<cplx> serial_out = a;
        const double serial_s = best_seconds(3, [&] {
            a = seed;
            fft::transform_serial(a, 1);
            g_sink += a[0].real();
        });
        a = seed;
        fft::transform(a, 1);
        double diff = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            diff = std::max(diff, std::abs(a[k] - serial_out[k]));
        const double openmp_s = best_seconds(3, [&] {
            a = seed;
            fft::transform(a, 1);
            g_sink += a[0].real();
        });
        row("raw transform", serial_s, openmp_s, diff);
    }

    if (g_sink == 12.9898) std::printf("\n");
    return 0;
}
