#include <benchmark/benchmark.h>

#include "tribo/automata.hpp"
#include "tribo/numeration.hpp"

using namespace tribo;

static const Kernel& kernel() {
  static const Kernel k(tribonacci_system());
  return k;
}

static void BM_AdditionAccepts(benchmark::State& state) {
  const Dfa add = addition_dfa();
  std::uint64_t x = 0;
  for (auto _ : state) {
    const Natural v[] = {natural(x), natural(x + 17), natural(2 * x + 17)};
    benchmark::DoNotOptimize(add.accepts(zip(v)));
    x = (x + 7919) % 1'000'000;
  }
}
BENCHMARK(BM_AdditionAccepts);

static void BM_CanonicalAddition(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(kernel().addition("x", "y", "z"));
}
BENCHMARK(BM_CanonicalAddition)->Unit(benchmark::kMillisecond);

static void BM_Minimize(benchmark::State& state) {
  const Kernel& k = kernel();
  const Dfa sum = k.intersect(k.addition("x", "y", "z"), k.addition("z", "y", "w"));
  for (auto _ : state) benchmark::DoNotOptimize(minimize(sum));
}
BENCHMARK(BM_Minimize)->Unit(benchmark::kMillisecond);

static void BM_Project(benchmark::State& state) {
  const Kernel& k = kernel();
  const Dfa chain = k.intersect(k.addition("x", "y", "z"), k.less_than("y", "x"));
  for (auto _ : state) benchmark::DoNotOptimize(k.exists(chain, "y"));
}
BENCHMARK(BM_Project)->Unit(benchmark::kMillisecond);
