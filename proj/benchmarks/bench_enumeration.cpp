#include <benchmark/benchmark.h>

#include "tribo/enumeration.hpp"
#include "tribo/logic.hpp"
#include "tribo/word.hpp"

using namespace tribo;

static const LinRep& cube_counts() {
  static const LinRep r = [] {
    Environment env;
    env.sequences.emplace("T", tribonacci_dfao());
    const auto p = compile("(j >= 1) & (i + 3 * j <= n) & Au (u >= i & u < i + 2 * j) => T[u] = T[u + j]", env,
                           {"n", "i", "j"});
    return linrep_from_dfa(p.dfa, "n");
  }();
  return r;
}

static void BM_MinimizeLinRep(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(minimize(cube_counts()));
}
BENCHMARK(BM_MinimizeLinRep)->Unit(benchmark::kMillisecond);

static void BM_EvalAll(benchmark::State& state) {
  const LinRep r = minimize(cube_counts());
  for (auto _ : state) benchmark::DoNotOptimize(eval_all(r, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_EvalAll)->Arg(1000)->Arg(10'000)->Unit(benchmark::kMillisecond);

static void BM_LinRepEqual(benchmark::State& state) {
  const LinRep r = minimize(cube_counts());
  for (auto _ : state) benchmark::DoNotOptimize(linrep_equal(r, cube_counts()));
}
BENCHMARK(BM_LinRepEqual)->Unit(benchmark::kMillisecond);
