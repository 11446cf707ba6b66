#include "thetarec/recursion.hpp"
#include "thetarec/stable_graph.hpp"

#include <benchmark/benchmark.h>

using namespace thetarec;

static void BM_AnalyzeA2(benchmark::State& state) {
    for (auto _ : state) {
        AnalyzedCurve curve(SpectralCurve::a2(), (int)state.range(0));
        benchmark::DoNotOptimize(curve.frame_z(0));
    }
}
BENCHMARK(BM_AnalyzeA2)->Arg(16)->Arg(24)->Arg(32);

static void BM_CorrelatorBessel(benchmark::State& state) {
    int g = (int)state.range(0);
    for (auto _ : state) {
        // A fresh engine per iteration so the memo does not hide the work.
        auto curve = std::make_shared<AnalyzedCurve>(SpectralCurve::bessel(), 6 * g + 10);
        CorrelatorEngine engine(curve);
        auto w = engine.correlator(g, 1);
        benchmark::DoNotOptimize(w);
    }
}
BENCHMARK(BM_CorrelatorBessel)->DenseRange(1, 4);

static void BM_CorrelatorA2(benchmark::State& state) {
    int g = (int)state.range(0);
    for (auto _ : state) {
        auto curve = std::make_shared<AnalyzedCurve>(SpectralCurve::a2(), 6 * g + 14);
        CorrelatorEngine engine(curve);
        auto w = engine.correlator(g, 1);
        benchmark::DoNotOptimize(w);
    }
}
BENCHMARK(BM_CorrelatorA2)->DenseRange(1, 3);

static void BM_MemoizedCorrelator(benchmark::State& state) {
    auto curve = std::make_shared<AnalyzedCurve>(SpectralCurve::a2(), 26);
    CorrelatorEngine engine(curve);
    engine.correlator(2, 1);
    for (auto _ : state) {
        auto w = engine.correlator(2, 1);
        benchmark::DoNotOptimize(w);
    }
}
BENCHMARK(BM_MemoizedCorrelator);

static void BM_LaplaceBergman(benchmark::State& state) {
    AnalyzedCurve curve(SpectralCurve::a2(), 30);
    curve.basis_expansion(0, 0, 0); // warm the frame caches once
    for (auto _ : state) {
        auto [rinv, r] = laplace_bergman(curve, (int)state.range(0));
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_LaplaceBergman)->Arg(4)->Arg(8);

static void BM_StableGraphEnumeration(benchmark::State& state) {
    int g = (int)state.range(0);
    for (auto _ : state) {
        auto graphs = enumerate_stable_graphs(g, 1);
        benchmark::DoNotOptimize(graphs);
    }
}
BENCHMARK(BM_StableGraphEnumeration)->DenseRange(1, 3);

BENCHMARK_MAIN();
