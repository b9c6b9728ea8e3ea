#include <benchmark/benchmark.h>

#include "datum_generators.hpp"
#include "fpsyn/standard_data.hpp"
#include "fpsyn/stcomplex.hpp"
#include "fpsyn/syncomplex.hpp"

using namespace fpsyn;

namespace {

/// prod_k (1 - (k + 1) T) of the given degree.
OnePoly split_poly(const Field& f, long degree) {
    OnePoly p = OnePoly::one(f);
    for (long k = 0; k < degree; ++k) {
        p = p * OnePoly(f, {f.one(), f.from_int(-(k + 2))});
    }
    return p;
}

void BM_Star(benchmark::State& state) {
    Field f = Field::rationals();
    OnePoly a = split_poly(f, state.range(0)), b = split_poly(f, state.range(0) + 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(star(a, b));
    }
}
BENCHMARK(BM_Star)->Arg(1)->Arg(2)->Arg(3)->Arg(4);

void BM_BezoutStar(benchmark::State& state) {
    Field f = Field::rationals();
    OnePoly a = split_poly(f, state.range(0)), b = split_poly(f, state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(bezout_star(a, b));
    }
}
BENCHMARK(BM_BezoutStar)->Arg(1)->Arg(2)->Arg(3);

void BM_StCohomology(benchmark::State& state) {
    Field f = Field::rationals(3);
    testgen::Gen gen(7);
    FilPhiNModule d = gen.module(f, 3, static_cast<std::size_t>(state.range(0)));
    OnePoly p = annihilating_poly(d.phi);
    for (auto _ : state) {
        benchmark::DoNotOptimize(st_cohomology(*st_build(d, p)));
    }
}
BENCHMARK(BM_StCohomology)->Arg(1)->Arg(2)->Arg(4)->Arg(6);

void BM_StCup(benchmark::State& state) {
    Field f = Field::rationals(3);
    testgen::Gen gen(8);
    FilPhiNModule d = gen.module(f, 3, static_cast<std::size_t>(state.range(0)));
    StComplexPtr c = st_build(d, OnePoly::parse(f, "1 - T"));
    StClass x = st_class_from_vector(c, 1, c->d0.column(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(st_cup(x, x, f.zero()));
    }
}
BENCHMARK(BM_StCup)->Arg(1)->Arg(2)->Arg(3);

void BM_SynCohomology(benchmark::State& state) {
    Field f = Field::rationals(3);
    testgen::Gen gen(9);
    HKDatumPtr d = testgen::share(with_acyclic_pair(
        datum_from_module(gen.module(f, 3, static_cast<std::size_t>(state.range(0)))), 0, f.from_int(5), 1));
    OnePoly p = annihilating_poly(d->phi[1]);
    for (auto _ : state) {
        SynComplexPtr c = syn_build(d, p, 1);
        benchmark::DoNotOptimize(syn_dims(*c));
    }
}
BENCHMARK(BM_SynCohomology)->Arg(1)->Arg(2)->Arg(3)->Arg(4);

void BM_TripleSymbol(benchmark::State& state) {
    CurveDatum curve = delta_torus_curve(state.range(0) == 1 ? 2 : 3);
    const Field& f = curve.X->field;
    Elem g = f.parse("g");
    Vector omega{f.one(), g, f.one() + g};
    // Phi omega = g omega; P0 kills g and P1 = P2 kill g / p = -1 / g.
    OnePoly p0(f, {f.one(), -g.inverse()});
    OnePoly p1(f, {f.one(), g});
    TripleInputs in{{LiftSide::HK, omega}, {LiftSide::HK, omega}, {LiftSide::HK, omega}, p0, p1, p1, f.zero(), {}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(triple_symbol(curve, in));
    }
}
BENCHMARK(BM_TripleSymbol)->Arg(1)->Arg(2);

} // namespace

BENCHMARK_MAIN();
