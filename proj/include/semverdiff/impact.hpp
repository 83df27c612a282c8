//===- impact.hpp - Triggerability, propagatability, verdicts --*- C++ -*-===//
#pragma once

#include "semverdiff/benign.hpp"
#include "semverdiff/callgraph.hpp"
#include "semverdiff/differ.hpp"
#include "semverdiff/semdiff.hpp"
#include "semverdiff/slicer.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace semverdiff {

enum class ApiStatus { Unchanged, ChangedCompatible, SemB, SynB, Error };

const char *to_string(ApiStatus s);
std::optional<ApiStatus> api_status_from_string(const std::string &s);

struct AnalysisConfig {
  KernelConfig kernel;
  int depth_cap = kDefaultDepthCap;
  std::size_t max_paths = kDefaultMaxPaths;

  void validate() const;
};

struct BenignEntry {
  std::string label;
  BenignTag tag;

  bool operator==(const BenignEntry &) const = default;
};

/// Intermediate results kept for the debug dumps.
struct ClusterDetail {
  std::set<std::string> old_members;
  std::set<std::string> new_members;
  DependencySummaries old_summaries;
  DependencySummaries new_summaries;
  std::vector<BenignEntry> benign;
  KernelResult kernel;
};

struct ClusterVerdict {
  int id = 0;
  double k = 0;
  bool is_semb = false;
  bool triggerable = false;
  bool propagatable = false;
  std::optional<ClusterDetail> detail;
};

struct ApiVerdict {
  std::string api; // method key
  ApiStatus status = ApiStatus::Unchanged;
  std::vector<ClusterVerdict> clusters;
  std::vector<std::string> evidence;
};

/// Flat ids of new-side nodes that the kernel could not match: those of the
/// first iteration with any unmatched new node.
std::set<int> mismatched_new_nodes(const KernelResult &r,
                                   const SemanticGraph &g_new);

/// True when some mismatched node depends on nothing (it runs regardless of
/// input) or on at least one input the old version already had. With no
/// mismatched new node at all (pure removals) the change is triggerable.
bool check_triggerability(const ModuleSnapshot &old_snap,
                          const ClusterPair &cluster,
                          const ClusterSlice &new_slice,
                          const std::set<int> &mismatched);

/// True when the outputs the mismatched nodes reach flow along some call
/// path from the API to the cluster root into an output of the API.
bool check_propagatability(const ModuleSnapshot &new_snap,
                           const CallGraph &cg_new, const ClusterPair &cluster,
                           const ClusterSlice &new_slice,
                           const std::set<int> &mismatched,
                           std::size_t max_paths = kDefaultMaxPaths);

/// Runs the whole pipeline for one API pair. Errors are not caught here.
ApiVerdict assess_api(const ApiPair &pair, const ModuleSnapshot &old_snap,
                      const ModuleSnapshot &new_snap,
                      const AnalysisConfig &cfg, bool keep_detail = false);

} // namespace semverdiff
