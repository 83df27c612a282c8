//===- semdiff_test.cpp - Semantic graphs and the WL kernel distance ------===//

#include "semverdiff/semdiff.hpp"
#include "kernel_checks.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace semverdiff;
using namespace semverdiff::test;

TEST(WlLabels, IsolatedNodesKeepTheirLabel) {
  SemanticGraph g;
  g.add_node("x");
  auto l = wl_relabel(g, 3);
  ASSERT_EQ(l.size(), 3u);
  EXPECT_EQ(l[0][0], wl_initial_label("x"));
  EXPECT_EQ(l[1][0], l[0][0]);
  EXPECT_EQ(l[2][0], l[0][0]);
}

TEST(WlLabels, CompressContract) {
  std::uint64_t base = wl_initial_label("n");
  SemanticEdge e{0, 1, EdgeKind::Guard, "!c"};
  auto entry = wl_neighbor_entry(e, true, 0xabcULL);
  EXPECT_EQ(entry, "guard[!c]:out:0000000000000abc");
  EXPECT_EQ(wl_compress(base, {}), base);
  EXPECT_EQ(wl_compress(base, {"b", "a"}),
            oracle_fnv(oracle_hex(base) + "|a,b"));
  EXPECT_EQ(wl_compress(base, {"b", "a"}), wl_compress(base, {"a", "b"}));
}

TEST(WlLabels, EdgeDirectionAndKindMatter) {
  SemanticGraph a, b, c;
  for (auto *g : {&a, &b, &c}) {
    g->add_node("x");
    g->add_node("y");
  }
  a.add_edge(0, 1, EdgeKind::DataDep);
  b.add_edge(1, 0, EdgeKind::DataDep);
  c.add_edge(0, 1, EdgeKind::ControlFlow);
  auto la = wl_relabel(a, 2), lb = wl_relabel(b, 2), lc = wl_relabel(c, 2);
  EXPECT_NE(la[1][0], lb[1][0]);
  EXPECT_NE(la[1][0], lc[1][0]);
}

TEST(WlOracle, MatchesOnEveryDigraphUpToFourNodes) {
  auto rep = exhaustive_wl_check(4, 4, 3);
  EXPECT_EQ(rep.labeled_covered, rep.labeled_total);
  EXPECT_EQ(rep.labeled_total, 2u * 2 + 4u * 16 + 8u * 512 + 16u * 65536);
  EXPECT_EQ(rep.graphs, rep.classes);
  EXPECT_EQ(rep.label_mismatches, 0u);
  EXPECT_EQ(rep.partition_mismatches, 0u);
  EXPECT_EQ(rep.collisions, 0u);
}

TEST(WlOracle, MatchesOnSampledFiveNodeLabelings) {
  auto rep = sampled_wl_check(20000, 5, 3, 11);
  EXPECT_EQ(rep.graphs, 20000u);
  EXPECT_EQ(rep.label_mismatches, 0u);
  EXPECT_EQ(rep.partition_mismatches, 0u);
}

TEST(WlOracle, MatchesOnRandomLargerGraphs) {
  std::mt19937_64 rng(7);
  std::bernoulli_distribution edge(0.25), lab(0.5);
  WlOracleReport rep;
  for (int t = 0; t < 300; ++t) {
    MatrixGraph g;
    int n = 6 + t % 5;
    g.adj.assign(n, std::vector<bool>(n));
    for (int k = 0; k < n; ++k)
      g.labels.push_back(lab(rng) ? "a" : "b");
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        g.adj[x][y] = edge(rng);
    check_wl_graph(g, 3, rep, nullptr);
  }
  EXPECT_EQ(rep.label_mismatches, 0u);
  EXPECT_EQ(rep.partition_mismatches, 0u);
}

TEST(Kernel, PathExampleByHand) {
  // a-b-c vs a-b-d: iteration 1 leaves c/d unmatched (1 pair), iteration 2
  // also b (2 pairs); K = (1 * 1 + 2 * 1/2) / 3.
  KernelConfig cfg;
  cfg.h = 2;
  cfg.beta = 1.0;
  auto r = kernel_distance(path_graph({"a", "b", "c"}),
                           path_graph({"a", "b", "d"}), cfg);
  ASSERT_EQ(r.per_iteration.size(), 2u);
  EXPECT_EQ(r.per_iteration[0].mismatch, 1.0);
  EXPECT_EQ(r.per_iteration[1].mismatch, 2.0);
  EXPECT_EQ(r.per_iteration[0].unmatched, 2u);
  EXPECT_EQ(r.per_iteration[1].unmatched, 4u);
  EXPECT_DOUBLE_EQ(r.k, 2.0 / 3.0);
  EXPECT_TRUE(r.is_semb);
}

TEST(Kernel, WeightsAtDefaultDepth) {
  EXPECT_EQ(iteration_weight(1, 3), 1.0);
  EXPECT_EQ(iteration_weight(2, 3), 2.0 / 3.0);
  EXPECT_EQ(iteration_weight(3, 3), 1.0 / 3.0);
  auto r = kernel_distance(path_graph({"a"}), path_graph({"b"}));
  ASSERT_EQ(r.per_iteration.size(), 3u);
  EXPECT_EQ(r.per_iteration[1].weight, 2.0 / 3.0);
}

TEST(Kernel, Properties) {
  auto rep = kernel_properties(1500, 12, 20261016);
  EXPECT_EQ(rep.trials, 1500u);
  EXPECT_GT(rep.nontrivial, 1000u);
  EXPECT_EQ(rep.self_nonzero, 0u);
  EXPECT_EQ(rep.asymmetric, 0u);
  EXPECT_EQ(rep.permutation_variant, 0u);
  EXPECT_EQ(rep.weight_errors, 0u);
  EXPECT_EQ(rep.beta_violations, 0u);
}

TEST(Kernel, BenignNodesAreDamped) {
  auto old_g = path_graph({"a", "b", "c", "d"});
  auto new_g = path_graph({"a", "b", "c", "d"});
  int extra = new_g.add_node("guard", true);
  new_g.add_edge(extra, 3, EdgeKind::Guard, "g");
  KernelConfig full;
  full.beta = 1.0;
  auto damped = kernel_distance(old_g, new_g);
  auto plain = kernel_distance(old_g, new_g, full);
  EXPECT_LT(damped.k, plain.k);
  EXPECT_EQ(damped.per_iteration[0].mismatch, 0.25);
}

TEST(Kernel, EmptyGraphs) {
  SemanticGraph empty;
  EXPECT_EQ(kernel_distance(empty, empty).k, 0.0);
  EXPECT_EQ(kernel_distance(empty, path_graph({"a"})).k, 1.0);
}

TEST(Kernel, GlobalPenaltyScalesByBenignShare) {
  auto old_g = path_graph({"a", "b"});
  SemanticGraph new_g;
  new_g.add_node("a", true);
  new_g.add_node("z");
  new_g.add_edge(0, 1, EdgeKind::ControlFlow);
  KernelConfig g;
  g.penalty_mode = PenaltyMode::Global;
  g.h = 1;
  EXPECT_DOUBLE_EQ(kernel_distance(old_g, new_g, g).k, 0.5 * 1.0 / 2.0);
}

TEST(Threshold, BoundaryIsExclusive) {
  KernelConfig cfg;
  EXPECT_FALSE(judge_value(0.1, cfg));
  EXPECT_TRUE(judge_value(std::nextafter(0.1, 1.0), cfg));
  EXPECT_TRUE(judge_value(0.10001, cfg));
  EXPECT_FALSE(judge_value(0.0, cfg));
}

TEST(Threshold, SyntheticPairAtExactlyPointOne) {
  // Ten-node paths that differ only in the last label, one iteration:
  // one unmatched pair over ten nodes.
  KernelConfig cfg;
  cfg.h = 1;
  std::vector<std::string> a(10, "s"), b(10, "s");
  b.back() = "t";
  auto r = kernel_distance(path_graph(a), path_graph(b), cfg);
  EXPECT_EQ(r.k, 0.1);
  EXPECT_FALSE(r.is_semb);
  EXPECT_FALSE(judge_cluster(r, cfg));

  a.pop_back();
  b.erase(b.begin());
  auto r9 = kernel_distance(path_graph(a), path_graph(b), cfg);
  EXPECT_GT(r9.k, 0.1);
  EXPECT_TRUE(r9.is_semb);
}

TEST(KernelConfig, Validation) {
  KernelConfig c;
  EXPECT_NO_THROW(c.validate());
  c.h = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.threshold = 1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.beta = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_EQ(penalty_mode_from_string("global"), PenaltyMode::Global);
  EXPECT_EQ(penalty_mode_from_string("per-node"), PenaltyMode::PerNode);
  EXPECT_FALSE(penalty_mode_from_string("other").has_value());
}

TEST(SemanticGraph, DecodeLoopGainsConditionsAndLoopEdge) {
  auto old_snap = load_case("if_to_while_decode_loop", "old");
  auto new_snap = load_case("if_to_while_decode_loop", "new");
  const std::string root = "NHttpConnection.consumeInput(ContentDecoder)";
  auto a = semantic_graph_of(slice_cluster(old_snap, root, {root}, 15));
  auto b = semantic_graph_of(slice_cluster(new_snap, root, {root}, 15));
  EXPECT_GT(b.size(), a.size());
  auto has_cycle = [](const SemanticGraph &g) {
    for (const auto &e : g.edges)
      if (e.kind == EdgeKind::ControlFlow && e.to <= e.from)
        return true;
    return false;
  };
  EXPECT_FALSE(has_cycle(a));
  EXPECT_TRUE(has_cycle(b));
  bool has_data = false;
  for (const auto &n : b.nodes)
    has_data = has_data || n.label.find("hasData") != std::string::npos;
  EXPECT_TRUE(has_data);
}

TEST(SemanticGraph, EmptySliceIsRejected) {
  auto snap = snapshot(R"(
class E { method public void f() { entry: return; } }
)");
  auto s = slice_cluster(snap, "E.f()", {"E.f()"}, 15);
  EXPECT_THROW(build_semantic_graph(s), EmptyClusterError);
  EXPECT_EQ(semantic_graph_of(s).size(), 0u);
}
