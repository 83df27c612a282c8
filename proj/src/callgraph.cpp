//===- callgraph.cpp - Call graph construction and signature diffing -----===//

#include "semverdiff/callgraph.hpp"

#include "semverdiff/errors.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace semverdiff {

std::vector<std::string> CallGraph::successors(const std::string &key) const {
  std::set<std::string> out;
  for (auto it = edges.lower_bound(CallEdge{key, {}, 0, false});
       it != edges.end() && it->caller == key; ++it)
    if (!it->external)
      out.insert(it->callee);
  return {out.begin(), out.end()};
}

CallGraph build_call_graph(const ModuleSnapshot &snapshot,
                           const std::string &api, int depth_cap) {
  if (depth_cap < 1 || depth_cap > kMaxDepthCap)
    throw std::invalid_argument("depth cap must lie in [1, 15], got " +
                                std::to_string(depth_cap));
  const MethodIR *root = snapshot.find_method(api);
  if (!root || root->signature.visibility != Visibility::Public)
    throw UnknownApiError("no public API " + api + " in snapshot " +
                          snapshot.version);

  CallGraph cg;
  cg.api = api;
  cg.depth_cap = depth_cap;
  cg.nodes.insert(api);
  cg.depth[api] = 0;

  std::deque<std::string> queue{api};
  while (!queue.empty()) {
    std::string key = queue.front();
    queue.pop_front();
    int d = cg.depth[key];
    const MethodIR *m = snapshot.find_method(key);
    for (const auto &b : m->blocks)
      for (const auto &s : b.stmts) {
        if (s.kind != StmtKind::Call)
          continue;
        std::string callee = s.callee->key();
        if (!snapshot.find_method(callee)) {
          cg.edges.insert({key, s.callee->str(), s.id, true});
          continue;
        }
        if (d + 1 > depth_cap)
          continue;
        cg.edges.insert({key, callee, s.id, false});
        if (cg.nodes.insert(callee).second) {
          cg.depth[callee] = d + 1;
          queue.push_back(callee);
        }
      }
  }
  return cg;
}

std::vector<ApiPair> pair_api_candidates(const ModuleSnapshot &old_snap,
                                         const ModuleSnapshot &new_snap) {
  std::vector<ApiPair> out;
  for (const MethodIR *m : old_snap.public_methods()) {
    const MethodIR *n = new_snap.find_method(m->signature.key());
    if (!n || n->signature.visibility != Visibility::Public)
      continue;
    const auto &ret_old = m->signature.return_type;
    const auto &ret_new = n->signature.return_type;
    if (ret_old == ret_new || widens_to(ret_new, ret_old))
      out.push_back({m->signature, n->signature});
  }
  return out;
}

const char *to_string(SynBKind k) {
  switch (k) {
  case SynBKind::MissingClass: return "MissingClass";
  case SynBKind::MissingMethod: return "MissingMethod";
  case SynBKind::ParamChange: return "ParamChange";
  case SynBKind::ReturnNarrowing: return "ReturnNarrowing";
  case SynBKind::VisibilityReduced: return "VisibilityReduced";
  }
  return "?";
}

std::optional<SynBKind> synb_kind_from_string(const std::string &s) {
  for (auto k : {SynBKind::MissingClass, SynBKind::MissingMethod,
                 SynBKind::ParamChange, SynBKind::ReturnNarrowing,
                 SynBKind::VisibilityReduced})
    if (s == to_string(k))
      return k;
  return std::nullopt;
}

std::vector<SynBFinding> detect_synb(const ModuleSnapshot &old_snap,
                                     const ModuleSnapshot &new_snap) {
  std::set<SynBFinding> found;
  for (const auto &[cname, cls] : old_snap.classes) {
    const ClassDecl *ncls = new_snap.find_class(cname);
    bool any_public = false;
    for (const auto &[key, m] : cls.methods) {
      if (m.signature.visibility != Visibility::Public)
        continue;
      any_public = true;
      if (!ncls) {
        found.insert({key, SynBKind::MissingMethod});
        continue;
      }
      auto it = ncls->methods.find(key);
      if (it == ncls->methods.end()) {
        bool overload = false;
        for (const auto &[_, nm] : ncls->methods)
          overload |= nm.signature.method_name == m.signature.method_name;
        found.insert({key, overload ? SynBKind::ParamChange
                                    : SynBKind::MissingMethod});
        continue;
      }
      const Signature &ns = it->second.signature;
      if (ns.visibility != Visibility::Public)
        found.insert({key, SynBKind::VisibilityReduced});
      else if (ns.return_type != m.signature.return_type &&
               !widens_to(ns.return_type, m.signature.return_type))
        found.insert({key, SynBKind::ReturnNarrowing});
    }
    if (!ncls && any_public)
      found.insert({cname, SynBKind::MissingClass});
  }
  return {found.begin(), found.end()};
}

std::vector<CallPath> all_call_paths(const CallGraph &cg,
                                     const std::string &from,
                                     const std::string &to,
                                     std::size_t max_paths) {
  if (!cg.contains(from) || !cg.contains(to))
    throw NoPathError("path endpoints not in call graph: " + from + " -> " + to);
  std::vector<CallPath> out;
  if (max_paths == 0)
    return out;
  // Breadth-first over partial simple paths: lengths come out non-decreasing
  // and, since successors are expanded in sorted order, lexicographic within
  // one length.
  std::deque<CallPath> queue{{from}};
  while (!queue.empty() && out.size() < max_paths) {
    CallPath path = std::move(queue.front());
    queue.pop_front();
    if (path.back() == to) {
      out.push_back(std::move(path));
      continue;
    }
    for (const auto &next : cg.successors(path.back())) {
      if (std::find(path.begin(), path.end(), next) != path.end())
        continue;
      CallPath longer = path;
      longer.push_back(next);
      queue.push_back(std::move(longer));
    }
  }
  if (out.empty())
    throw NoPathError("no call path from " + from + " to " + to);
  return out;
}

} // namespace semverdiff
