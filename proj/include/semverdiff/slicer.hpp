//===- slicer.hpp - Cluster flattening and dependency summaries -*- C++ -*-===//
//
// A cluster side is analyzed as one flat statement graph: calls to other
// cluster members are inlined (arguments become copies into the callee's
// parameters, callee returns become copies into the call's result), so the
// backward slice crosses method boundaries without a separate
// inter-procedural pass. Calls leaving the cluster stay opaque.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "semverdiff/flow.hpp"
#include "semverdiff/ir.hpp"

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace semverdiff {

enum class FlatRole {
  Real, // an original statement of some member
  Copy, // parameter binding or return value transfer across an inlined call
  Nop,  // inlined call site, return point, void return
};

struct FlatNode {
  FlatRole role = FlatRole::Real;
  std::string method; // origin method key
  int stmt_id = 0;    // origin statement id
  int ctx = 0;        // inline context, 0 is the root
  Statement stmt;     // locals renamed to name@ctx
  bool caught_throw = false;
};

struct HandlerInfo {
  std::string method;
  std::string exception_type;
  int head = 0; // flat node of the handler's first statement
};

struct FlatBody {
  std::string root;
  std::vector<std::string> root_param_types;
  std::vector<FlatNode> nodes;
  FlowGraph flow;
  std::vector<HandlerInfo> handlers;
  /// Nodes reachable from the entry without taking an exceptional edge.
  std::vector<bool> normal_reach;
};

/// Throws RecursionLimitError when inlining nests deeper than depth_cap.
/// Recursive calls among members are left opaque.
FlatBody flatten_cluster(const ModuleSnapshot &snap, const std::string &root,
                         const std::set<std::string> &members,
                         int depth_cap);

struct SummaryStatement {
  std::string method;
  int stmt_id = 0;
  int node = 0; // flat node
  std::string normalized_text;
  std::set<std::string> roles_used;    // var, parameter, field, external_call
  std::set<std::string> linked_inputs; // "param:K" or "field:C.f"
  std::set<std::string> outputs;       // outputs this statement reaches

  bool operator==(const SummaryStatement &) const = default;
};

struct ConditionSummary {
  SummaryStatement statement;
  std::string dbs;
  /// Predicate under which each successor (by branch successor index) runs.
  std::array<std::string, 2> arms;
  std::vector<SummaryStatement> associated_data;

  bool operator==(const ConditionSummary &) const = default;
};

struct ExceptionSummary {
  std::string type;
  SummaryStatement statement;
  std::optional<std::size_t> guard; // index into cds

  bool operator==(const ExceptionSummary &) const = default;
};

struct DependencySummaries {
  std::vector<SummaryStatement> dds;
  std::vector<ConditionSummary> cds;
  std::vector<ExceptionSummary> es;

  bool empty() const { return dds.empty() && cds.empty() && es.empty(); }
  bool operator==(const DependencySummaries &) const = default;
};

struct OutputSite {
  int node = 0;
  std::string name;       // "return", "field:C.f", "object:param(K).f", "throw:E"
  std::string owner_type; // class owning the written field, if any
  std::string field;
};

/// Relations among summary nodes needed to lay out the semantic graph and to
/// run the benign matchers. All ints are flat node ids.
struct SliceRelations {
  std::vector<int> nodes; // every summary node, sorted by (method, stmt, node)
  std::vector<std::pair<int, int>> data_edges;
  struct Guard {
    int branch;
    int arm;
    int node;
  };
  std::vector<Guard> guards;
  std::vector<std::pair<int, int>> flow_edges; // condition to next condition
  std::vector<OutputSite> outputs;
  /// Every summary node that stores a field, with the owning class.
  std::vector<OutputSite> field_writes;
  std::vector<int> dds_nodes;
  std::vector<int> assoc_nodes; // union of all conditions' associated data
};

struct ClusterSlice {
  FlatBody body;
  DependencySummaries summaries;
  SliceRelations relations;

  /// Summary text for a flat node that is part of the summaries.
  const std::string &label(int node) const;
  const SummaryStatement *statement(int node) const;

  std::vector<std::pair<int, std::string>> labels; // sorted by node
  std::vector<SummaryStatement> all_statements;    // sorted by node
};

ClusterSlice slice_cluster(const ModuleSnapshot &snap, const std::string &root,
                           const std::set<std::string> &members,
                           int depth_cap);

/// Canonical relational predicate: operands of symmetric operators are
/// sorted; for ordering operators the operands are sorted and the operator
/// mirrored.
std::string canonical_predicate(const std::string &op, std::string a,
                                std::string b);
std::string negate_relop(const std::string &op);
std::string make_dbs(const std::string &p, const std::string &q);

} // namespace semverdiff
