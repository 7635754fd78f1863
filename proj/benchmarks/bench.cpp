#include <benchmark/benchmark.h>

#include "h3green/traces.hpp"

using namespace h3green;

static void BM_green_ball(benchmark::State& state) {
    Point3 j{{0, 0}, 1.0}, p2{{0.5, 0.5}, 1.0};
    GreenConfig cfg;
    cfg.T = (double)state.range(0);
    cfg.ladder = 1;
    for (auto _ : state) {
        GreenEval e = green_function(-4, j, p2, 2.0, cfg);
        benchmark::DoNotOptimize(e.value);
        state.counters["terms"] = (double)e.terms_used;
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_green_ball)->RangeMultiplier(2)->Range(50, 800)->Complexity();

static void BM_enumerate_classes(benchmark::State& state) {
    Rat m((long)state.range(0));
    for (auto _ : state) {
        ClassList cl = enumerate_classes(-4, m, 0, false);
        benchmark::DoNotOptimize(cl.reps.size());
    }
}
BENCHMARK(BM_enumerate_classes)->Arg(1)->Arg(4)->Arg(12);

static void BM_rep_number(benchmark::State& state) {
    TernaryLattice lat = TernaryLattice::diagonal(8, 2, 2);
    Int a = Int(1) << state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rep_number(lat, 0, 1, a));
    }
}
BENCHMARK(BM_rep_number)->DenseRange(3, 8);

static void BM_eisenstein_coefficient(benchmark::State& state) {
    TernaryLattice lat = TernaryLattice::diagonal(8, 2, 2);
    Rat n(15, 16);
    int gamma = lat.coset_index({Rat(1, 8), Rat(0), Rat(0)});
    for (auto _ : state) {
        EisCoefficient c = eis_coefficient_plus(lat, n, gamma);
        benchmark::DoNotOptimize(c.half_det);
    }
}
BENCHMARK(BM_eisenstein_coefficient);

static void BM_double_trace_rhs(benchmark::State& state) {
    PrincipalPart pp;
    pp.n = 1;
    pp.entries.push_back({Rat(1), 0, Rat(2)});
    for (auto _ : state) {
        SymbolicScalar s = double_trace_rhs(-4, 1, pp, 4, 0);
        benchmark::DoNotOptimize(s.is_zero());
    }
}
BENCHMARK(BM_double_trace_rhs);

BENCHMARK_MAIN();
