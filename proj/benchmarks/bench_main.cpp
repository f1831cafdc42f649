#include "zfscale/fock.hpp"
#include "zfscale/numerics.hpp"
#include "zfscale/scattering.hpp"
#include "zfscale/zf.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace zfscale;

static void BM_IntegrateGaussian(benchmark::State& state) {
    QuadratureConfig cfg;
    const double w = double(state.range(0)) / 10.0;
    for (auto _ : state) {
        auto r = integrate([w](double x) { return cplx(std::exp(-x * x / (2 * w * w)), 0.0); }, -40, 40, cfg);
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(BM_IntegrateGaussian)->Arg(1)->Arg(10)->Arg(50);

static void BM_IntegrateND(benchmark::State& state) {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-8;
    const int n = int(state.range(0));
    Box box(n, {-6.0, 6.0});
    for (auto _ : state) {
        auto r = integrate_nd(
            [](const std::vector<double>& x) {
                double s = 0;
                for (double v : x) s += v * v;
                return cplx(std::exp(-s), 0.0);
            },
            box, cfg);
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(BM_IntegrateND)->DenseRange(1, 3);

static void BM_NormalOrder(benchmark::State& state) {
    const int half = int(state.range(0));
    Word w;
    for (int i = 0; i < half; ++i) w.push_back(ann(i));
    for (int i = 0; i < half; ++i) w.push_back(cre(half + i));
    for (auto _ : state) {
        auto nf = normal_order(w, Mode::Rapidity);
        benchmark::DoNotOptimize(nf.terms.data());
    }
}
BENCHMARK(BM_NormalOrder)->DenseRange(1, 4);

static void BM_TruncatedFockBuild(benchmark::State& state) {
    const int M = int(state.range(0));
    std::vector<double> x(M), w(M, 2.0 / M);
    for (int i = 0; i < M; ++i) x[i] = -1.0 + (i + 0.5) * w[i];
    const auto S2 = rapidity_kernel(ScatteringFunction::sinh_gordon(std::sqrt(4 * M_PI / 5)));
    for (auto _ : state) {
        TruncatedFock tf(S2, x, w, 3);
        benchmark::DoNotOptimize(tf.dim());
    }
}
BENCHMARK(BM_TruncatedFockBuild)->Arg(3)->Arg(6)->Arg(10)->Arg(20);

static void BM_ScatteringEval(benchmark::State& state) {
    const auto S = ScatteringFunction::make_limit_family(1, {cplx(0.3, 0.7), cplx(0.0, 1.1)});
    double t = -5.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(S.at(t));
        t = t > 5 ? -5.0 : t + 1e-3;
    }
}
BENCHMARK(BM_ScatteringEval);

BENCHMARK_MAIN();
