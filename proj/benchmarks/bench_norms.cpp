#include <benchmark/benchmark.h>

#include <entgeom/entanglement.hpp>
#include <entgeom/inner_radius.hpp>

using namespace entgeom;

namespace {

SolverOptions bench_options() {
  SolverOptions o;
  o.restarts = 16;
  o.seed = 1;
  return o;
}

void BM_InjectiveBipartite(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PureState xi = random_state(SpaceShape({n, n}), 1);
  for (auto _ : state) benchmark::DoNotOptimize(injective_norm(xi, bench_options()));
}
BENCHMARK(BM_InjectiveBipartite)->Arg(4)->Arg(16)->Arg(64);

void BM_InjectiveThreeSlot(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PureState xi = random_state(SpaceShape({2, n, n}), 2);
  for (auto _ : state) benchmark::DoNotOptimize(injective_norm(xi, bench_options()));
}
BENCHMARK(BM_InjectiveThreeSlot)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_ProjectiveThreeSlot(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PureState xi = random_state(SpaceShape({2, 2, n}), 3);
  for (auto _ : state) benchmark::DoNotOptimize(projective_norm(xi, bench_options()));
}
BENCHMARK(BM_ProjectiveThreeSlot)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_AlternatingAscent(benchmark::State& state) {
  const Tensor t({4, 4, 4}, random_gaussian_vector(64, 4));
  const ProductVector start = random_product(std::vector<std::size_t>{4, 4, 4}, 5);
  for (auto _ : state) benchmark::DoNotOptimize(alternating_ascent(t, start.factors(), 100, 1e-12));
}
BENCHMARK(BM_AlternatingAscent);

void BM_EntanglementTwoQubits(benchmark::State& state) {
  const DensityOperator rho = random_density(SpaceShape({2, 2}), 0);
  for (auto _ : state) benchmark::DoNotOptimize(entanglement(rho, bench_options()));
}
BENCHMARK(BM_EntanglementTwoQubits)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_SeparableSearch(benchmark::State& state) {
  const DensityOperator rho = random_density(SpaceShape({2, 3}), 1);
  for (auto _ : state) benchmark::DoNotOptimize(find_separable_decomposition(rho, bench_options()));
}
BENCHMARK(BM_SeparableSearch)->Unit(benchmark::kMillisecond);

void BM_InnerRadiusSearch(benchmark::State& state) {
  SolverOptions o = bench_options();
  o.restarts = 4;
  for (auto _ : state) benchmark::DoNotOptimize(inner_radius(SpaceShape({2, 2, 2}), o));
}
BENCHMARK(BM_InnerRadiusSearch)->Unit(benchmark::kMillisecond)->Iterations(2);

}  // namespace

BENCHMARK_MAIN();
