#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "bridgefold/agraph.hpp"
#include "bridgefold/braid.hpp"
#include "bridgefold/knot_tree.hpp"
#include "bridgefold/stallings.hpp"
#include "bridgefold/tree_of_groups.hpp"
#include "bridgefold/word.hpp"

using namespace bridgefold;

namespace {

// Nested satellite-of-sums tree, eight vertices across all three kinds.
const char* kBigTree =
    "sum(sat(braid 3 \"s2 s1^-1 s2 s2\", sum(torus(3,2), torus(5,2))),"
    " sat(braid 2 \"s1^3\", torus(5,3)), torus(7,2))";

KnotTree big_tree() { return parse_tree(kBigTree); }

void BM_BridgeClosedForm(benchmark::State& state) {
  KnotTree t = big_tree();
  for (auto _ : state) benchmark::DoNotOptimize(t.bridge_number());
}
BENCHMARK(BM_BridgeClosedForm);

void BM_BridgeRecursive(benchmark::State& state) {
  KnotTree t = big_tree();
  for (auto _ : state) benchmark::DoNotOptimize(t.bridge_number_recursive());
}
BENCHMARK(BM_BridgeRecursive);

void BM_SubgroupGraphBuild(benchmark::State& state) {
  const int n = 5;
  std::vector<Word> gens;
  for (const char* text : {"x1 x2 X3 x4", "x2 x2 x1", "X4 x5 x1 x3", "x3 X1"}) {
    Word c = parse_word(text);
    gens.push_back(multiply(multiply(c, Word({static_cast<int>(gens.size() % n) + 1})),
                            invert(c)));
  }
  for (auto _ : state) benchmark::DoNotOptimize(SubgroupGraph::build(gens, n));
}
BENCHMARK(BM_SubgroupGraphBuild);

void BM_ArtinAction(benchmark::State& state) {
  BraidWord b = parse_braid("s2 s1^-1 s3 s2^2 s4 s3^-1 s1 s2", 5);
  for (auto _ : state) benchmark::DoNotOptimize(artin(b));
}
BENCHMARK(BM_ArtinAction);

void BM_ApplyPower(benchmark::State& state) {
  BraidContext ctx = BraidContext::make(parse_braid("s2 s1^-1 s2 s2", 3));
  Word w = parse_word("x1 x3 X2 x1");
  for (auto _ : state) benchmark::DoNotOptimize(ctx.apply_power(w, 6));
}
BENCHMARK(BM_ApplyPower);

void BM_FoldRun(benchmark::State& state) {
  KnotTree tree = parse_tree("sum(torus(3,2), torus(3,2))");
  TreeOfGroups tg = TreeOfGroups::build(tree, true);
  std::vector<APath> paths = parse_paths(tg,
                                         "a:1 e:d1 a:m e:u1 a:1\n"
                                         "a:1 e:d1 a:v,m,v^-1 e:u1 a:1\n"
                                         "a:1 e:d2 a:m e:u2 a:1\n"
                                         "a:1 e:d2 a:v,m,v^-1 e:u2 a:1\n");
  AGraph g = AGraph::build_initial(tg, paths);
  for (auto _ : state) {
    FoldTrace tr = run_folds(g);
    benchmark::DoNotOptimize(tr.final_graph.complexity());
  }
}
BENCHMARK(BM_FoldRun);

}  // namespace

BENCHMARK_MAIN();
