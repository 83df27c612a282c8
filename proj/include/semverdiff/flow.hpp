//===- flow.hpp - Statement-level dataflow primitives ----------*- C++ -*-===//
//
// A FlowGraph is a statement-granular control-flow graph annotated with the
// variables each node defines and uses. Everything dependence-related (data
// edges, post-dominators, control dependence, straight-line chains) is
// computed here so the per-method PDG and the inlined cluster body share one
// implementation.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <set>
#include <string>
#include <vector>

namespace semverdiff {

struct FlowNode {
  std::vector<int> succ;
  /// Exceptional successors (call sites inside try regions). They carry
  /// data flow into handlers but take no part in control dependence.
  std::vector<int> exc_succ;
  std::vector<std::string> strong_defs; // kill earlier definitions
  std::vector<std::string> weak_defs;   // add without killing (o->f stores)
  std::vector<std::string> uses;
  /// Uses that read only the reference, not the object behind it (the base
  /// of an o->f store). Weak definitions do not reach them.
  std::vector<std::string> address_uses;
  bool is_branch = false;
  bool exits = false; // normal return edge to the virtual exit
};

struct FlowGraph {
  std::vector<FlowNode> nodes;
  int entry = 0;

  std::size_t size() const { return nodes.size(); }
  std::vector<std::vector<int>> predecessors() const;
};

struct DataEdge {
  int def = 0;
  int use = 0;
  std::string var;

  auto operator<=>(const DataEdge &) const = default;
};

struct ReachingDefs {
  std::vector<DataEdge> edges;
  /// Per node: used variables whose value may come from method entry
  /// (no definition on some path). Used to detect field inputs.
  std::vector<std::set<std::string>> from_entry;
};

ReachingDefs reaching_definitions(const FlowGraph &g);

/// `dependent` executes or not depending on which successor of `branch`
/// (by index into its succ list) is taken.
struct ControlDep {
  int branch = 0;
  int succ_index = 0;
  int dependent = 0;

  auto operator<=>(const ControlDep &) const = default;
};

/// Post-dominator sets over the graph plus a virtual exit (index size()).
/// Successors that cannot reach the exit (uncaught throws) are ignored when a
/// node also has successors that can, so a guard that only throws does not
/// make the code after it control dependent on the guard.
std::vector<std::vector<bool>> post_dominators(const FlowGraph &g);

std::vector<ControlDep> control_dependences(const FlowGraph &g);

/// Maximal straight-line chains: chain id per node. Nodes unreachable from
/// the entry still get chains of their own. `position` receives each node's
/// offset within its chain.
std::vector<int> straight_line_chains(const FlowGraph &g,
                                      std::vector<int> *position = nullptr);

} // namespace semverdiff
