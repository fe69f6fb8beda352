#include <benchmark/benchmark.h>

#include "tribo/corpus.hpp"
#include "tribo/logic.hpp"
#include "tribo/word.hpp"

using namespace tribo;

static Environment environment() {
  Environment env;
  env.sequences.emplace("T", tribonacci_dfao());
  return env;
}

static void BM_CompileSquares(benchmark::State& state) {
  const Environment env = environment();
  for (auto _ : state)
    benchmark::DoNotOptimize(compile("n > 0 & Ei Aj i <= j & j < i + n => T[j] = T[j + n]", env));
}
BENCHMARK(BM_CompileSquares)->Unit(benchmark::kMillisecond);

static void BM_CompileAperiodic(benchmark::State& state) {
  const Environment env = environment();
  for (auto _ : state)
    benchmark::DoNotOptimize(compile("p >= 1 & En Ai i >= n => T[i] = T[i + p]", env));
}
BENCHMARK(BM_CompileAperiodic)->Unit(benchmark::kMillisecond);

static void BM_CompileFourthPowers(benchmark::State& state) {
  const Environment env = environment();
  for (auto _ : state)
    benchmark::DoNotOptimize(compile("n > 0 & Ei Aj i <= j & j < i + 3 * n => T[j] = T[j + n]", env));
}
BENCHMARK(BM_CompileFourthPowers)->Unit(benchmark::kMillisecond)->Iterations(2);

static void BM_FastCorpus(benchmark::State& state) {
  CorpusOptions options;
  options.skip_slow = true;
  for (auto _ : state) benchmark::DoNotOptimize(run_all(options));
}
BENCHMARK(BM_FastCorpus)->Unit(benchmark::kSecond)->Iterations(1);
