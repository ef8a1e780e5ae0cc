#include <benchmark/benchmark.h>

#include "colsparse/graphcolor.hpp"
#include "colsparse/harness.hpp"
#include "colsparse/hypermatch.hpp"
#include "colsparse/kcspip.hpp"
#include "colsparse/lp.hpp"

using namespace colsparse;

static void BM_SolveLp(benchmark::State& state) {
  const auto inst = gen_random_kcs(static_cast<std::size_t>(state.range(0)), 30, 3, 1);
  for (auto _ : state) benchmark::DoNotOptimize(solve_packing_lp(inst, true));
}
BENCHMARK(BM_SolveLp)->Arg(20)->Arg(40)->Arg(80);

static void BM_KcspipRound(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto inst = gen_random_kcs(60, 40, k, 2);
  const auto x = solve_packing_lp(inst, true);
  const KcsRounder rounder(inst, x, KcsParams::defaults(k));
  std::uint64_t t = 0;
  for (auto _ : state) {
    Rng rng = trial_rng(3, t++);
    benchmark::DoNotOptimize(rounder.round(rng));
  }
}
BENCHMARK(BM_KcspipRound)->Arg(2)->Arg(5)->Arg(10);

static void BM_GreedyColoring(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t d = 4;
  Rng rng(4);
  DiGraph g(n);
  for (std::size_t v = 0; v < n; ++v) {
    while (g.out_degree(v) < d) {
      const std::size_t w = rng.below(n);
      if (w != v) g.add_arc(v, w);
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(color_directed_graph(g, d));
}
BENCHMARK(BM_GreedyColoring)->Arg(100)->Arg(1000);

static void BM_HypergraphMatching(benchmark::State& state) {
  const auto h = gen_random_hypergraph(200, static_cast<std::size_t>(state.range(0)), 4, 5);
  const auto x = solve_packing_lp(to_packing_instance(h), false);
  const MatchingRounder rounder(h, x.x, attenuation_g);
  std::uint64_t t = 0;
  for (auto _ : state) {
    Rng rng = trial_rng(6, t++);
    benchmark::DoNotOptimize(rounder.round(rng));
  }
}
BENCHMARK(BM_HypergraphMatching)->Arg(100)->Arg(400);
BENCHMARK_MAIN();
