//===- differ.hpp - Changed-method classification and clustering -*- C++ -*-===//
#pragma once

#include "semverdiff/callgraph.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace semverdiff {

/// Canonical text of a method body: locals renamed to v0, v1, ... in order of
/// first definition, block labels replaced by block ordinals. Literals,
/// fields and callees are kept verbatim.
std::string normalized_body(const MethodIR &m);
std::uint64_t body_fingerprint(const MethodIR &m);

struct MethodClassification {
  std::set<std::string> changed;
  std::set<std::string> unchanged;
};

/// Classifies every method reachable in either call graph.
MethodClassification classify_methods(const ModuleSnapshot &old_snap,
                                      const CallGraph &cg_old,
                                      const ModuleSnapshot &new_snap,
                                      const CallGraph &cg_new);

struct ClusterPair {
  int id = 0;
  std::string api;
  std::set<std::string> old_members;
  std::set<std::string> new_members;
  std::optional<std::string> root_old; // absent when the old side is empty
  std::optional<std::string> root_new;
};

/// Connected components of the changed methods over the union of both call
/// graphs. Roots are the members nearest the API; ties go to the smallest
/// key. Clusters are ordered by their smallest member key.
std::vector<ClusterPair> group_clusters(const ApiPair &api,
                                        const CallGraph &cg_old,
                                        const CallGraph &cg_new,
                                        const std::set<std::string> &changed);

} // namespace semverdiff
