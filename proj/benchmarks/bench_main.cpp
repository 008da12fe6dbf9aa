#include <benchmark/benchmark.h>

#include "escape_lab/analytic.hpp"
#include "escape_lab/erlang.hpp"
#include "escape_lab/escape.hpp"
#include "escape_lab/graphical.hpp"
#include "escape_lab/richardson.hpp"

using namespace escape_lab;

static void BM_EscapeEvents(benchmark::State& state) {
  const ModelParams params(2, 2.0);
  const InitialConfig cfg{{VertexId::root()}, {VertexId::parse("0")}};
  EscapeOptions opts;
  opts.prune_irrelevant_type2 = state.range(0) != 0;
  std::uint64_t seed = 0;
  std::int64_t events = 0;
  for (auto _ : state) {
    EscapeProcess proc(params, cfg, seed++, opts);
    for (int i = 0; i < 5000 && proc.step(); ++i) ++events;
  }
  state.SetItemsProcessed(events);
}
BENCHMARK(BM_EscapeEvents)->Arg(1)->Arg(0);

static void BM_FieldSample(benchmark::State& state) {
  const TreeParams tree{2};
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto field = PassageTimeField::sample(tree, 1.0, n, seed++);
    benchmark::DoNotOptimize(field.count_occupied(n, 8.0));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(disk_size(n, tree)));
}
BENCHMARK(BM_FieldSample)->Arg(10)->Arg(14);

static void BM_ErlangLog(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  double t = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_erlang_cdf(n, 1.0, t * static_cast<double>(n)));
    t = t < 2.0 ? t + 0.01 : 0.1;
  }
}
BENCHMARK(BM_ErlangLog)->Arg(12)->Arg(2000);

static void BM_ContainmentWalk(benchmark::State& state) {
  const TreeParams tree{2};
  const double t = static_cast<double>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const LazyField slow(tree, 1.0, derive_seed(seed, {1}));
    const LazyField fast(tree, 12.0, derive_seed(seed, {2}));
    ++seed;
    benchmark::DoNotOptimize(reached_set_contained(slow, fast, t));
  }
}
BENCHMARK(BM_ContainmentWalk)->Arg(4)->Arg(12);

static void BM_GraphicalBuild(benchmark::State& state) {
  const ModelParams params(2, 2.0);
  const InitialConfig cfg{{VertexId::root()}, {VertexId::parse("0")}};
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(graphical_build(cfg, params, 2.0, 6, seed++));
  }
}
BENCHMARK(BM_GraphicalBuild);
BENCHMARK_MAIN();
