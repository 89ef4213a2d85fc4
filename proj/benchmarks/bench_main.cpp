#include <benchmark/benchmark.h>

#include <random>

#include "corpus.hpp"
#include "hydra/context/reaching.hpp"
#include "hydra/repair/repair.hpp"
#include "hydra/treesim/zhang_shasha.hpp"
#include "oracles.hpp"

using namespace hydra;

static void BM_TreeDistance(benchmark::State& state) {
  std::mt19937 rng(1);
  const auto size = static_cast<std::size_t>(state.range(0));
  auto a = testing::random_tree(rng, size);
  auto b = testing::random_tree(rng, size);
  const auto va = treesim::TreeView::full(*a);
  const auto vb = treesim::TreeView::full(*b);
  const treesim::SimilarityConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(treesim::tree_distance(va, vb, cfg));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TreeDistance)->RangeMultiplier(2)->Range(8, 128)->Complexity();

static void BM_ReachingDefinitions(benchmark::State& state) {
  const auto p = testing::load_case("brent");
  const auto* fn = p.function("optimize");
  const auto stmts = minilang::function_statements(*fn);
  for (auto _ : state) {
    const context::ControlFlowGraph g(*fn);
    for (const auto* s : stmts) {
      for (const auto& v : context::extract_variable_accesses(*s)) {
        benchmark::DoNotOptimize(context::reaching_definitions(g, *s, v));
      }
    }
  }
}
BENCHMARK(BM_ReachingDefinitions);

static void BM_RepairBrent(benchmark::State& state) {
  const auto ws = driver::open_workspace(testing::run_config("brent"));
  for (auto _ : state) {
    auto r = repair::repair_loop(ws.project, ws.lineage_ptr(), ws.config);
    benchmark::DoNotOptimize(r.status);
  }
}
BENCHMARK(BM_RepairBrent)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
