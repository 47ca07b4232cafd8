#include <benchmark/benchmark.h>

#include "clonelab/conditions.hpp"
#include "clonelab/constructions.hpp"
#include "clonelab/fixtures.hpp"
#include "clonelab/ops.hpp"
#include "clonelab/ppcon.hpp"
#include "clonelab/verifiers.hpp"

using namespace clonelab;

static void BM_Minor(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const Operation f = catalog::symmetric_minority(0);
  const auto chain = generalized_minority_chain(f, n);
  const Operation& g = chain.back().operation;
  std::vector<std::size_t> map(g.arity());
  for (std::size_t i = 0; i < map.size(); ++i) map[i] = i % 3;
  const VarMap sigma(3, map);
  for (auto _ : state) benchmark::DoNotOptimize(minor(g, sigma));
}
BENCHMARK(BM_Minor)->Arg(5)->Arg(7)->Arg(9);

static void BM_GenerateClone(benchmark::State& state) {
  const std::vector<Operation> gens{Operation(2, 2, {1, 1, 1, 0})};
  CloneOptions o;
  o.max_arity = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(generate_clone(2, gens, o));
}
BENCHMARK(BM_GenerateClone)->Arg(2)->Arg(3);

static void BM_CyclicSearch(benchmark::State& state) {
  const Structure c3 = fixtures::cycle(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_witness(c3, Symmetry::cyclic, conditions::sigma_p(3), 1'000'000));
  }
}
BENCHMARK(BM_CyclicSearch)->Unit(benchmark::kMillisecond);

static void BM_Homomorphism(benchmark::State& state) {
  const Structure a = fixtures::k21();
  const Structure b = fixtures::k21();
  for (auto _ : state) benchmark::DoNotOptimize(find_homomorphism(a, b, {}));
}
BENCHMARK(BM_Homomorphism);

static void BM_E3Pipeline(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_e3_pipeline());
}
BENCHMARK(BM_E3Pipeline);

static void BM_Verifier(benchmark::State& state, const char* name) {
  for (auto _ : state) benchmark::DoNotOptimize(verify(name, {}));
}
BENCHMARK_CAPTURE(BM_Verifier, xi, "xi-homomorphism")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Verifier, splitting_malcev, "splitting-malcev")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
