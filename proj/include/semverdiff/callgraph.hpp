//===- callgraph.hpp - Depth-capped call graphs and API pairing -*- C++ -*-===//
#pragma once

#include "semverdiff/ir.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace semverdiff {

inline constexpr int kDefaultDepthCap = 15;
inline constexpr int kMaxDepthCap = 15;
inline constexpr std::size_t kDefaultMaxPaths = 256;

struct CallEdge {
  std::string caller;
  std::string callee; // method key, or callee signature string if external
  int call_site = 0;
  bool external = false;

  auto operator<=>(const CallEdge &) const = default;
};

/// Call graph rooted at one API. Nodes are method keys resolved in the
/// snapshot; external callees appear only as edge targets.
struct CallGraph {
  std::string api;
  std::set<std::string> nodes;
  std::set<CallEdge> edges;
  std::map<std::string, int> depth;
  int depth_cap = kDefaultDepthCap;

  bool contains(const std::string &key) const { return nodes.count(key) != 0; }
  /// In-snapshot callees of `key`, sorted and deduplicated.
  std::vector<std::string> successors(const std::string &key) const;
};

/// Throws UnknownApiError unless `api` is a public method of `snapshot`,
/// and std::invalid_argument unless 1 <= depth_cap <= 15.
CallGraph build_call_graph(const ModuleSnapshot &snapshot,
                           const std::string &api,
                           int depth_cap = kDefaultDepthCap);

struct ApiPair {
  Signature old_sig;
  Signature new_sig;

  std::string key() const { return old_sig.key(); }
};

std::vector<ApiPair> pair_api_candidates(const ModuleSnapshot &old_snap,
                                         const ModuleSnapshot &new_snap);

enum class SynBKind {
  MissingClass,
  MissingMethod,
  ParamChange,
  ReturnNarrowing,
  VisibilityReduced,
};

const char *to_string(SynBKind k);
std::optional<SynBKind> synb_kind_from_string(const std::string &s);

struct SynBFinding {
  std::string signature; // method key, or class name for MissingClass
  SynBKind kind;

  auto operator<=>(const SynBFinding &) const = default;
};

std::vector<SynBFinding> detect_synb(const ModuleSnapshot &old_snap,
                                     const ModuleSnapshot &new_snap);

using CallPath = std::vector<std::string>;

/// Simple paths from `from` to `to`, shortest first and lexicographic within
/// a length, truncated at `max_paths`. Throws NoPathError if there is none.
std::vector<CallPath> all_call_paths(const CallGraph &cg,
                                     const std::string &from,
                                     const std::string &to,
                                     std::size_t max_paths = kDefaultMaxPaths);

} // namespace semverdiff
