//===- cfg.hpp - Per-method CFG and PDG ------------------------*- C++ -*-===//
#pragma once

#include "semverdiff/flow.hpp"
#include "semverdiff/ir.hpp"

#include <string>
#include <utility>
#include <vector>

namespace semverdiff {

/// A handler for `handler_type` catches `thrown` when the names agree or the
/// handler names the catch-all types Exception or Throwable.
bool exception_matches(const std::string &handler_type,
                       const std::string &thrown);

/// Whether block `block` lies inside region `r` (inclusive label range).
bool region_covers(const MethodIR &m, const TryRegion &r, int block);

/// Id of the first statement executed when control enters block `block`
/// (empty blocks fall through).
int block_head(const MethodIR &m, int block);

/// Basic-block graph. Block i corresponds to method.blocks[i].
struct MethodCfg {
  std::string method;
  std::vector<std::string> labels;
  std::vector<std::vector<int>> succ;     // branch, goto, fallthrough
  std::vector<std::vector<int>> exc_succ; // try region -> handler
  std::vector<std::pair<int, int>> back_edges;

  std::size_t branch_count = 0;
  bool has_loop() const { return !back_edges.empty(); }
};

MethodCfg build_cfg(const MethodIR &m);

/// Statement-granular flow graph of one method; node i is statement id i.
/// Calls are opaque. Class fields appear as variables named "@Class.field";
/// a store through `o->f` is a weak definition of `o`.
FlowGraph method_flow_graph(const MethodIR &m);

/// Variable name standing for class field C.f in flow graphs.
std::string field_var(const std::string &cls, const std::string &field);

struct Pdg {
  std::string method;
  std::vector<int> nodes;
  std::vector<DataEdge> data_edges;
  std::vector<ControlDep> control_edges;
};

Pdg build_pdg(const MethodIR &m);

/// Statement ids the method's own outputs depend on (backward closure over
/// the PDG from returns with a value, field stores and throws that leave
/// the method).
std::vector<bool> output_slice(const MethodIR &m, const Pdg &pdg);

} // namespace semverdiff
