//===- benign.cpp - Benign-change pattern matchers ------------------------===//

#include "semverdiff/benign.hpp"

#include <algorithm>

namespace semverdiff {

const char *to_string(BenignTag t) {
  switch (t) {
  case BenignTag::CcAdjust: return "CC_ADJUST";
  case BenignTag::ExtraHandling: return "EXTRA_HANDLING";
  case BenignTag::AugmentedOutput: return "AUGMENTED_OUTPUT";
  case BenignTag::AssignRevision: return "ASSIGN_REVISION";
  }
  return "?";
}

std::optional<BenignTag> benign_tag_from_string(const std::string &s) {
  for (auto t : {BenignTag::CcAdjust, BenignTag::ExtraHandling,
                 BenignTag::AugmentedOutput, BenignTag::AssignRevision})
    if (s == to_string(t))
      return t;
  return std::nullopt;
}

std::set<int> BenignSet::nodes() const {
  std::set<int> out;
  for (const auto &[n, _] : entries)
    out.insert(n);
  return out;
}

void BenignSet::merge(const std::map<int, BenignTag> &more) {
  for (const auto &[n, t] : more)
    entries.emplace(n, t);
}

namespace {

std::map<std::string, int> label_counts(const ClusterSlice &s) {
  std::map<std::string, int> out;
  for (const auto &[_, l] : s.labels)
    ++out[l];
  return out;
}

std::multiset<std::string> labels_of(const ClusterSlice &s,
                                     const std::set<int> &nodes) {
  std::multiset<std::string> out;
  for (int n : nodes)
    out.insert(s.label(n));
  return out;
}

const ConditionSummary *condition(const ClusterSlice &s, int node) {
  for (const auto &c : s.summaries.cds)
    if (c.statement.node == node)
      return &c;
  return nullptr;
}

/// Summary nodes governed by one arm of a condition, without the condition
/// itself and its associated data.
std::set<int> region(const ClusterSlice &s, int cond, int arm) {
  std::set<int> assoc;
  if (const auto *c = condition(s, cond))
    for (const auto &a : c->associated_data)
      assoc.insert(a.node);
  std::set<int> out;
  for (const auto &g : s.relations.guards)
    if (g.branch == cond && g.arm == arm && g.node != cond &&
        !assoc.count(g.node))
      out.insert(g.node);
  return out;
}

/// Novel nodes among `seeds` and their novel data ancestors.
std::set<int> with_novel_ancestors(const ClusterSlice &s,
                                   const std::set<int> &novel,
                                   const std::set<int> &seeds) {
  std::map<int, std::vector<int>> preds;
  for (auto [a, b] : s.relations.data_edges)
    preds[b].push_back(a);
  std::set<int> out;
  std::vector<int> stack;
  for (int n : seeds)
    if (novel.count(n) && out.insert(n).second)
      stack.push_back(n);
  while (!stack.empty()) {
    int n = stack.back();
    stack.pop_back();
    for (int p : preds[n])
      if (novel.count(p) && out.insert(p).second)
        stack.push_back(p);
  }
  return out;
}

void tag_all(std::map<int, BenignTag> &out, const std::set<int> &nodes,
             BenignTag t) {
  for (int n : nodes)
    out.emplace(n, t);
}

std::set<int> novel_assoc(const ClusterSlice &s, const std::set<int> &novel,
                          int cond) {
  std::set<int> out;
  if (const auto *c = condition(s, cond))
    for (const auto &a : c->associated_data)
      if (novel.count(a.node))
        out.insert(a.node);
  return out;
}

} // namespace

std::set<int> novel_nodes(const ClusterSlice &old_slice,
                          const ClusterSlice &new_slice) {
  auto old_counts = label_counts(old_slice);
  std::map<std::string, std::vector<int>> by_label;
  for (const auto &[n, l] : new_slice.labels)
    by_label[l].push_back(n);
  std::set<int> out;
  for (auto &[l, ids] : by_label) {
    int excess = static_cast<int>(ids.size()) - old_counts[l];
    for (int k = 0; k < excess; ++k)
      out.insert(ids[ids.size() - 1 - k]);
  }
  return out;
}

std::map<int, BenignTag> match_cc_adjustment(const BenignContext &c) {
  std::map<int, BenignTag> out;
  auto novel = novel_nodes(c.old_slice, c.new_slice);
  auto vanished = novel_nodes(c.new_slice, c.old_slice);
  std::set<int> used;
  for (const auto &nc : c.new_slice.summaries.cds) {
    int n = nc.statement.node;
    if (!novel.count(n))
      continue;
    auto r0 = labels_of(c.new_slice, region(c.new_slice, n, 0));
    auto r1 = labels_of(c.new_slice, region(c.new_slice, n, 1));
    for (const auto &oc : c.old_slice.summaries.cds) {
      int o = oc.statement.node;
      if (!vanished.count(o) || used.count(o))
        continue;
      auto q0 = labels_of(c.old_slice, region(c.old_slice, o, 0));
      auto q1 = labels_of(c.old_slice, region(c.old_slice, o, 1));
      if ((r0 == q0 && r1 == q1) || (r0 == q1 && r1 == q0)) {
        used.insert(o);
        out.emplace(n, BenignTag::CcAdjust);
        tag_all(out, novel_assoc(c.new_slice, novel, n), BenignTag::CcAdjust);
        break;
      }
    }
  }
  return out;
}

std::map<int, BenignTag> match_extra_handling(const BenignContext &c) {
  std::map<int, BenignTag> out;
  auto novel = novel_nodes(c.old_slice, c.new_slice);
  auto old_counts = label_counts(c.old_slice);

  for (const auto &nc : c.new_slice.summaries.cds) {
    int n = nc.statement.node;
    if (!novel.count(n))
      continue;
    for (int arm = 0; arm < 2; ++arm) {
      auto fresh = region(c.new_slice, n, arm);
      auto kept = region(c.new_slice, n, 1 - arm);
      bool all_new = !fresh.empty() &&
                     std::all_of(fresh.begin(), fresh.end(),
                                 [&](int k) { return novel.count(k) != 0; });
      bool all_old = std::all_of(kept.begin(), kept.end(), [&](int k) {
        return old_counts.count(c.new_slice.label(k)) != 0;
      });
      if (!all_new || !all_old)
        continue;
      out.emplace(n, BenignTag::ExtraHandling);
      tag_all(out, with_novel_ancestors(c.new_slice, novel, fresh),
              BenignTag::ExtraHandling);
      tag_all(out, novel_assoc(c.new_slice, novel, n),
              BenignTag::ExtraHandling);
      break;
    }
  }

  std::set<std::pair<std::string, std::string>> old_handlers;
  for (const auto &h : c.old_slice.body.handlers)
    old_handlers.insert({h.method, h.exception_type});
  const auto &body = c.new_slice.body;
  std::set<int> summary(c.new_slice.relations.nodes.begin(),
                        c.new_slice.relations.nodes.end());
  for (const auto &h : body.handlers) {
    if (old_handlers.count({h.method, h.exception_type}))
      continue;
    std::set<int> reach;
    std::vector<int> stack{h.head};
    std::vector<bool> seen(body.nodes.size(), false);
    seen[h.head] = true;
    while (!stack.empty()) {
      int k = stack.back();
      stack.pop_back();
      if (!body.normal_reach[k] && summary.count(k))
        reach.insert(k);
      for (int s : body.flow.nodes[k].succ)
        if (!seen[s] && !body.normal_reach[s]) {
          seen[s] = true;
          stack.push_back(s);
        }
    }
    tag_all(out, with_novel_ancestors(c.new_slice, novel, reach),
            BenignTag::ExtraHandling);
  }
  return out;
}

std::map<int, BenignTag> match_augmented_output(const BenignContext &c) {
  using Field = std::pair<std::string, std::string>;
  auto fields = [](const ClusterSlice &s) {
    std::map<Field, std::vector<int>> out;
    for (const auto &w : s.relations.field_writes)
      if (!w.owner_type.empty())
        out[{w.owner_type, w.field}].push_back(w.node);
    return out;
  };
  auto old_fields = fields(c.old_slice);
  auto new_fields = fields(c.new_slice);

  auto decl_type = [](const ModuleSnapshot &snap, const Field &f)
      -> std::optional<std::string> {
    if (const ClassDecl *cls = snap.find_class(f.first))
      if (const FieldDecl *d = cls->find_field(f.second))
        return d->type;
    return std::nullopt;
  };

  std::set<std::string> owners;
  for (const auto &[f, _] : old_fields) {
    if (!new_fields.count(f) ||
        decl_type(c.old_snap, f) != decl_type(c.new_snap, f))
      return {};
    owners.insert(f.first);
  }
  // Any field the old owner classes declared must survive with its type.
  for (const auto &o : owners)
    if (const ClassDecl *cls = c.old_snap.find_class(o))
      for (const auto &fd : cls->fields)
        if (decl_type(c.new_snap, {o, fd.name}) != fd.type)
          return {};

  auto novel = novel_nodes(c.old_slice, c.new_slice);
  std::map<int, BenignTag> out;
  for (const auto &[f, nodes] : new_fields) {
    if (old_fields.count(f))
      continue;
    std::set<int> seeds(nodes.begin(), nodes.end());
    tag_all(out, with_novel_ancestors(c.new_slice, novel, seeds),
            BenignTag::AugmentedOutput);
  }
  return out;
}

std::map<int, BenignTag> match_assignment_revision(const BenignContext &c) {
  auto novel = novel_nodes(c.old_slice, c.new_slice);
  const auto &rel = c.new_slice.relations;
  std::set<int> dds(rel.dds_nodes.begin(), rel.dds_nodes.end());
  std::map<int, BenignTag> out;
  for (int n : rel.assoc_nodes)
    if (novel.count(n) && !dds.count(n))
      out.emplace(n, BenignTag::AssignRevision);
  // A new condition that only tests such auxiliary variables belongs to them.
  for (const auto &cd : c.new_slice.summaries.cds) {
    if (!novel.count(cd.statement.node) || cd.associated_data.empty())
      continue;
    bool auxiliary = true;
    for (const auto &a : cd.associated_data)
      auxiliary = auxiliary && out.count(a.node);
    if (auxiliary)
      out.emplace(cd.statement.node, BenignTag::AssignRevision);
  }
  return out;
}

BenignSet collect_benign(const BenignContext &c) {
  BenignSet set;
  set.merge(match_cc_adjustment(c));
  set.merge(match_extra_handling(c));
  set.merge(match_augmented_output(c));
  set.merge(match_assignment_revision(c));
  return set;
}

} // namespace semverdiff
