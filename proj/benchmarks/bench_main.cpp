#include <benchmark/benchmark.h>

#include <random>

#include "unionbound/bounds_new.hpp"
#include "unionbound/lp.hpp"
#include "unionbound/space.hpp"
#include "unionbound/subset_opt.hpp"
#include "unionbound/weights.hpp"

using namespace unionbound;

namespace {

SelectionQuery positive_query(std::size_t n) {
  std::mt19937_64 rng(n);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  SelectionQuery q;
  q.weights.resize(n);
  double total = 0.0;
  for (double& v : q.weights) total += (v = u(rng));
  q.mandatory = 0;
  q.direction = Direction::MaxBelow;
  q.threshold = 0.6 * total;
  return q;
}

PartialInfo info_for(std::size_t n) { return derive_partial_info(generate_random_space(n, 42, SpaceModel::dirichlet())); }

WeightVector weights_for(std::size_t n) { return random_trial_weights(n, 42, 0); }

}  // namespace

static void BM_SelectExhaustive(benchmark::State& state) {
  const SelectionQuery q = positive_query(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(select_exhaustive(q));
}
BENCHMARK(BM_SelectExhaustive)->DenseRange(8, 20, 4);

static void BM_SelectDp(benchmark::State& state) {
  const SelectionQuery q = positive_query(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(select_dp(q, 1e-6));
}
BENCHMARK(BM_SelectDp)->DenseRange(8, 20, 4);

static void BM_SelectFptas(benchmark::State& state) {
  const SelectionQuery q = positive_query(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(select_fptas(q, 0.01));
}
BENCHMARK(BM_SelectFptas)->DenseRange(8, 20, 4);

static void BM_Lnew3Exact(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PartialInfo info = info_for(n);
  const WeightVector w = weights_for(n);
  for (auto _ : state) benchmark::DoNotOptimize(lnew3(info, w));
}
BENCHMARK(BM_Lnew3Exact)->DenseRange(4, 16, 4);

static void BM_Lnew3Fptas(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PartialInfo info = info_for(n);
  const WeightVector w = weights_for(n);
  for (auto _ : state) benchmark::DoNotOptimize(lnew3(info, w, SolveMode::fptas(0.01)));
}
BENCHMARK(BM_Lnew3Fptas)->DenseRange(4, 16, 4);

static void BM_Lnew4Exact(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PartialInfo info = info_for(n);
  const WeightVector w = weights_for(n);
  for (auto _ : state) benchmark::DoNotOptimize(lnew4(info, w));
}
BENCHMARK(BM_Lnew4Exact)->DenseRange(4, 16, 4);

static void BM_OptimalInclass(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PartialInfo info = info_for(n);
  const WeightVector w = weights_for(n);
  for (auto _ : state) benchmark::DoNotOptimize(optimal_inclass_bound(info, w, BoundSense::Lower));
}
BENCHMARK(BM_OptimalInclass)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

static void BM_RandomSearch(benchmark::State& state) {
  const PartialInfo info = info_for(6);
  RandomSearchOptions opts;
  opts.trials = 10000;
  opts.seed = 7;
  opts.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(random_search(info, opts));
}
BENCHMARK(BM_RandomSearch)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_MAIN();
