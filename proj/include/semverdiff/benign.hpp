//===- benign.hpp - Benign-change pattern matchers -------------*- C++ -*-===//
//
// Matchers tag nodes of the NEW cluster slice (by flat node id). A node
// counts as "novel" when its summary label occurs more often in the new
// slice than in the old one; only novel nodes are ever tagged.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "semverdiff/slicer.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>

namespace semverdiff {

enum class BenignTag { CcAdjust, ExtraHandling, AugmentedOutput, AssignRevision };

const char *to_string(BenignTag t);
std::optional<BenignTag> benign_tag_from_string(const std::string &s);

struct BenignSet {
  std::map<int, BenignTag> entries;

  std::size_t size() const { return entries.size(); }
  std::set<int> nodes() const;
  /// Adds entries not yet tagged; earlier tags win.
  void merge(const std::map<int, BenignTag> &more);
};

/// Inputs shared by the matchers.
struct BenignContext {
  const ModuleSnapshot &old_snap;
  const ModuleSnapshot &new_snap;
  const ClusterSlice &old_slice;
  const ClusterSlice &new_slice;
};

/// New nodes whose label is in excess over the old slice (highest ids first
/// within a label).
std::set<int> novel_nodes(const ClusterSlice &old_slice,
                          const ClusterSlice &new_slice);

std::map<int, BenignTag> match_cc_adjustment(const BenignContext &c);
std::map<int, BenignTag> match_extra_handling(const BenignContext &c);
std::map<int, BenignTag> match_augmented_output(const BenignContext &c);
std::map<int, BenignTag> match_assignment_revision(const BenignContext &c);

BenignSet collect_benign(const BenignContext &c);

} // namespace semverdiff
