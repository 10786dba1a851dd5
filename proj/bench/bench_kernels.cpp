// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include "teamlogic/atoms.hpp"
#include "teamlogic/branching.hpp"
#include "teamlogic/eso.hpp"
#include "teamlogic/teamsem.hpp"

using namespace teamlogic;

namespace {

void BM_soundness(benchmark::State& state, bool parallel)
{
    for (auto _ : state) {
        auto r = soundness_exhaustive(3, 2, static_cast<std::size_t>(state.range(0)), closure_rules(), parallel);
        benchmark::DoNotOptimize(r.violations);
    }
}
BENCHMARK_CAPTURE(BM_soundness, parallel, true)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_soundness, serial, false)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

// The formula fails on this team, so the translated sentence is false and the
// brute-force search visits every interpretation.
struct EsoCase {
    Structure st = Structure::of_size(2);
    Team team{{"x", "y", "z"}, {{0, 0, 0}, {1, 1, 0}}};
    EsoSentence sentence = translate(parse_formula("exists w. (ind(x ;; w) and w = x)"), VarTuple{"x", "y", "z"});
};

void BM_eso_bruteforce(benchmark::State& state, bool parallel)
{
    EsoCase c;
    for (auto _ : state) {
        bool v = parallel ? eval_eso_bruteforce_parallel(c.st, c.team, c.sentence)
                          : eval_eso_bruteforce(c.st, c.team, c.sentence);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK_CAPTURE(BM_eso_bruteforce, parallel, true)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_eso_bruteforce, serial, false)->Unit(benchmark::kMillisecond);

void BM_eso_sat(benchmark::State& state)
{
    EsoCase c;
    for (auto _ : state) benchmark::DoNotOptimize(eval_eso(c.st, c.team, c.sentence));
}
BENCHMARK(BM_eso_sat)->Unit(benchmark::kMillisecond);

// No Skolem pair exists for this matrix once |M| > 1, so every pair is tried.
void BM_skolem(benchmark::State& state, bool parallel)
{
    const auto st = Structure::of_size(static_cast<std::size_t>(state.range(0)));
    const auto h = parse_formula("branch{forall x exists y; forall u exists v}. (y = u and v = x)");
    for (auto _ : state) {
        bool v = parallel ? henkin_eval_skolem(st, {}, h) : henkin_eval_skolem_serial(st, {}, h);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK_CAPTURE(BM_skolem, parallel, true)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_skolem, serial, false)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

// The strong variant has no counterexample, so the search is exhaustive.
void BM_counterexample_strong(benchmark::State& state, bool parallel)
{
    for (auto _ : state) {
        auto r = parallel ? find_remark_counterexample(3, 27, true) : find_remark_counterexample_serial(3, 27, true);
        benchmark::DoNotOptimize(r.candidates);
    }
}
BENCHMARK_CAPTURE(BM_counterexample_strong, parallel, true)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_counterexample_strong, serial, false)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
