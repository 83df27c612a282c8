//===- semdiff.hpp - Semantic graphs and the WL kernel distance -*- C++ -*-===//
#pragma once

#include "semverdiff/slicer.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace semverdiff {

enum class EdgeKind { ControlFlow, DataDep, Guard };

const char *to_string(EdgeKind k);

struct SemanticNode {
  int id = 0;
  std::string label;
  bool benign = false;
  int origin = -1; // flat node of the cluster body, -1 for synthetic graphs
};

struct SemanticEdge {
  int from = 0;
  int to = 0;
  EdgeKind kind = EdgeKind::ControlFlow;
  std::string tag; // guard edges: predicate under which `to` runs

  auto operator<=>(const SemanticEdge &) const = default;
};

struct SemanticGraph {
  std::vector<SemanticNode> nodes;
  std::vector<SemanticEdge> edges;

  std::size_t size() const { return nodes.size(); }
  int add_node(std::string label, bool benign = false);
  void add_edge(int from, int to, EdgeKind kind, std::string tag = {});
};

/// One node per summary statement, condition and uncaught exception.
/// `benign` holds flat node ids. Throws EmptyClusterError when the slice has
/// no summaries.
SemanticGraph build_semantic_graph(const ClusterSlice &slice,
                                   const std::set<int> &benign = {});

/// Same, but an empty slice yields an empty graph.
SemanticGraph semantic_graph_of(const ClusterSlice &slice,
                                const std::set<int> &benign = {});

/// Label compression. With no neighbors the label is returned unchanged.
std::uint64_t wl_compress(std::uint64_t label,
                          std::vector<std::string> neighbor_entries);
/// Neighbor entry "kind[tag]:dir:label" as hashed by wl_compress.
std::string wl_neighbor_entry(const SemanticEdge &e, bool outgoing,
                              std::uint64_t neighbor_label);
std::uint64_t wl_initial_label(const std::string &label);

/// labels[i][n] is node n's label at iteration i+1; iteration 1 is the hash
/// of the node's own label.
std::vector<std::vector<std::uint64_t>> wl_relabel(const SemanticGraph &g,
                                                   int h);

enum class PenaltyMode { PerNode, Global };

const char *to_string(PenaltyMode m);
std::optional<PenaltyMode> penalty_mode_from_string(const std::string &s);

struct KernelConfig {
  int h = 3;
  double threshold = 0.1;
  double beta = 0.25;
  PenaltyMode penalty_mode = PenaltyMode::PerNode;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

struct IterationStat {
  int i = 0;
  std::size_t unmatched = 0; // nodes without a partner, both graphs
  double mismatch = 0;       // weighted mismatch count
  double weight = 0;         // w_i
  std::vector<int> unmatched_old;
  std::vector<int> unmatched_new;
};

struct KernelResult {
  double k = 0;
  std::vector<IterationStat> per_iteration;
  bool is_semb = false;
};

/// Weight of iteration i out of h: (h - i + 1) / h.
double iteration_weight(int i, int h);

/// `g_new` carries the benign flags used for damping.
KernelResult kernel_distance(const SemanticGraph &g_old,
                             const SemanticGraph &g_new,
                             const KernelConfig &cfg = {});

bool judge_cluster(const KernelResult &r, const KernelConfig &cfg = {});
bool judge_value(double k, const KernelConfig &cfg = {});

} // namespace semverdiff
