#include "thetarec/laurent.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace thetarec;

namespace {

ExtScalar dense_scalar(std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 9);
    ExtScalar s;
    for (int k = 0; k < ExtScalar::kDim; ++k) s.coord(k) = Rational(num(rng), den(rng));
    return s;
}

ExtScalar sparse_scalar(std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 9);
    std::uniform_int_distribution<int> idx(0, ExtScalar::kDim - 1);
    return ExtScalar::basis(idx(rng), Rational(num(rng), den(rng)));
}

} // namespace

static void BM_ExtScalarMulDense(benchmark::State& state) {
    std::mt19937 rng(3);
    ExtScalar a = dense_scalar(rng), b = dense_scalar(rng);
    for (auto _ : state) {
        ExtScalar c = a * b;
        benchmark::DoNotOptimize(c);
    }
}
BENCHMARK(BM_ExtScalarMulDense);

static void BM_ExtScalarMulSparse(benchmark::State& state) {
    std::mt19937 rng(3);
    ExtScalar a = sparse_scalar(rng), b = sparse_scalar(rng);
    for (auto _ : state) {
        ExtScalar c = a * b;
        benchmark::DoNotOptimize(c);
    }
}
BENCHMARK(BM_ExtScalarMulSparse);

static void BM_ExtScalarInverse(benchmark::State& state) {
    std::mt19937 rng(5);
    ExtScalar a = dense_scalar(rng);
    if (a.is_zero()) a = ExtScalar(1);
    for (auto _ : state) {
        ExtScalar c = a.inverse();
        benchmark::DoNotOptimize(c);
    }
}
BENCHMARK(BM_ExtScalarInverse);

static void BM_LaurentMul(benchmark::State& state) {
    int order = (int)state.range(0);
    std::mt19937 rng(7);
    std::vector<ExtScalar> ca, cb;
    for (int k = 0; k <= order; ++k) {
        ca.push_back(sparse_scalar(rng));
        cb.push_back(sparse_scalar(rng));
    }
    LaurentSeries a(ca, -2, order - 2), b(cb, -2, order - 2);
    for (auto _ : state) {
        LaurentSeries c = a * b;
        benchmark::DoNotOptimize(c);
    }
    state.SetComplexityN(order);
}
BENCHMARK(BM_LaurentMul)->RangeMultiplier(2)->Range(8, 64)->Complexity();

static void BM_SeriesReversion(benchmark::State& state) {
    int order = (int)state.range(0);
    std::mt19937 rng(11);
    std::vector<ExtScalar> c{ExtScalar(1)};
    for (int k = 2; k <= order; ++k) c.push_back(sparse_scalar(rng));
    LaurentSeries s(c, 1, order);
    for (auto _ : state) {
        LaurentSeries w = s.reversion();
        benchmark::DoNotOptimize(w);
    }
    state.SetComplexityN(order);
}
BENCHMARK(BM_SeriesReversion)->RangeMultiplier(2)->Range(8, 16)->Complexity();

BENCHMARK_MAIN();
