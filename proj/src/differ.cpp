//===- differ.cpp - Changed-method classification and clustering ----------===//

#include "semverdiff/differ.hpp"

#include "semverdiff/hash.hpp"
#include "semverdiff/mvil.hpp"

#include <map>

namespace semverdiff {

std::string normalized_body(const MethodIR &m) {
  std::map<std::string, std::string> locals;
  auto rename = [&](const std::string &name) {
    auto it = locals.find(name);
    if (it != locals.end())
      return it->second;
    std::string fresh = "v" + std::to_string(locals.size());
    locals.emplace(name, fresh);
    return fresh;
  };
  auto block_ref = [&](const std::string &label) {
    return "B" + std::to_string(m.block_index(label));
  };

  std::string out = m.signature.str() + " " + to_string(m.signature.visibility) +
                    "\n";
  for (std::size_t bi = 0; bi < m.blocks.size(); ++bi) {
    out += "B" + std::to_string(bi) + ":\n";
    for (Statement s : m.blocks[bi].stmts) {
      for (auto &u : s.uses)
        if (u.is_local())
          u.name = rename(u.name);
      if (s.field.on_object)
        s.field.owner = rename(s.field.owner);
      if (s.def)
        s.def = rename(*s.def);
      if (s.kind == StmtKind::Branch) {
        s.target = block_ref(s.target);
        s.else_target = block_ref(s.else_target);
      } else if (s.kind == StmtKind::Goto) {
        s.target = block_ref(s.target);
      }
      out += print_statement(s) + "\n";
    }
  }
  for (const auto &r : m.try_regions)
    out += "try " + block_ref(r.start) + ".." + block_ref(r.end) + " " +
           r.exception_type + " " + block_ref(r.handler) + "\n";
  return out;
}

std::uint64_t body_fingerprint(const MethodIR &m) {
  return fnv1a64(normalized_body(m));
}

MethodClassification classify_methods(const ModuleSnapshot &old_snap,
                                      const CallGraph &cg_old,
                                      const ModuleSnapshot &new_snap,
                                      const CallGraph &cg_new) {
  std::set<std::string> all(cg_old.nodes.begin(), cg_old.nodes.end());
  all.insert(cg_new.nodes.begin(), cg_new.nodes.end());

  MethodClassification out;
  for (const auto &key : all) {
    const MethodIR *a = old_snap.find_method(key);
    const MethodIR *b = new_snap.find_method(key);
    bool same = a && b && normalized_body(*a) == normalized_body(*b);
    (same ? out.unchanged : out.changed).insert(key);
  }
  return out;
}

std::vector<ClusterPair> group_clusters(const ApiPair &api,
                                        const CallGraph &cg_old,
                                        const CallGraph &cg_new,
                                        const std::set<std::string> &changed) {
  std::map<std::string, std::set<std::string>> adj;
  for (const auto &key : changed)
    if (cg_old.contains(key) || cg_new.contains(key))
      adj[key];
  for (const CallGraph *cg : {&cg_old, &cg_new})
    for (const auto &e : cg->edges) {
      if (e.external || !adj.count(e.caller) || !adj.count(e.callee))
        continue;
      adj[e.caller].insert(e.callee);
      adj[e.callee].insert(e.caller);
    }

  auto pick_root = [](const std::set<std::string> &members,
                      const CallGraph &cg) -> std::optional<std::string> {
    std::optional<std::string> best;
    int best_depth = 0;
    for (const auto &m : members) { // sorted, so the first minimum wins ties
      int d = cg.depth.at(m);
      if (!best || d < best_depth) {
        best = m;
        best_depth = d;
      }
    }
    return best;
  };

  std::vector<ClusterPair> out;
  std::set<std::string> seen;
  for (const auto &[start, _] : adj) {
    if (seen.count(start))
      continue;
    std::set<std::string> comp;
    std::vector<std::string> stack{start};
    seen.insert(start);
    while (!stack.empty()) {
      std::string k = stack.back();
      stack.pop_back();
      comp.insert(k);
      for (const auto &n : adj[k])
        if (seen.insert(n).second)
          stack.push_back(n);
    }
    ClusterPair c;
    c.id = static_cast<int>(out.size());
    c.api = api.key();
    for (const auto &k : comp) {
      if (cg_old.contains(k))
        c.old_members.insert(k);
      if (cg_new.contains(k))
        c.new_members.insert(k);
    }
    c.root_old = pick_root(c.old_members, cg_old);
    c.root_new = pick_root(c.new_members, cg_new);
    out.push_back(std::move(c));
  }
  return out;
}

} // namespace semverdiff
