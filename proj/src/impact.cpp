//===- impact.cpp - Triggerability, propagatability, verdicts -------------===//

#include "semverdiff/impact.hpp"

#include "semverdiff/cfg.hpp"
#include "semverdiff/errors.hpp"

#include <cstdio>
#include <map>
#include <stdexcept>

namespace semverdiff {

const char *to_string(ApiStatus s) {
  switch (s) {
  case ApiStatus::Unchanged: return "Unchanged";
  case ApiStatus::ChangedCompatible: return "ChangedCompatible";
  case ApiStatus::SemB: return "SemB";
  case ApiStatus::SynB: return "SynB";
  case ApiStatus::Error: return "Error";
  }
  return "?";
}

std::optional<ApiStatus> api_status_from_string(const std::string &s) {
  for (auto v : {ApiStatus::Unchanged, ApiStatus::ChangedCompatible,
                 ApiStatus::SemB, ApiStatus::SynB, ApiStatus::Error})
    if (s == to_string(v))
      return v;
  return std::nullopt;
}

void AnalysisConfig::validate() const {
  kernel.validate();
  if (depth_cap < 1 || depth_cap > kMaxDepthCap)
    throw std::invalid_argument("depth cap must lie in [1, 15]");
  if (max_paths == 0)
    throw std::invalid_argument("max_paths must be positive");
}

std::set<int> mismatched_new_nodes(const KernelResult &r,
                                   const SemanticGraph &g_new) {
  std::set<int> out;
  for (const auto &it : r.per_iteration) {
    if (it.unmatched_new.empty())
      continue;
    for (int id : it.unmatched_new)
      out.insert(g_new.nodes[id].origin);
    break;
  }
  return out;
}

bool check_triggerability(const ModuleSnapshot &old_snap,
                          const ClusterPair &cluster,
                          const ClusterSlice &new_slice,
                          const std::set<int> &mismatched) {
  if (mismatched.empty())
    return true;
  const MethodIR *old_root = nullptr;
  if (cluster.root_new)
    old_root = old_snap.find_method(*cluster.root_new);
  if (!old_root && cluster.root_old)
    old_root = old_snap.find_method(*cluster.root_old);
  const auto &new_types = new_slice.body.root_param_types;

  auto input_in_old = [&](const std::string &in) {
    if (in.rfind("param:", 0) == 0) {
      std::size_t k = std::stoul(in.substr(6));
      if (!old_root || k >= old_root->signature.param_types.size())
        return false;
      return k < new_types.size() &&
             old_root->signature.param_types[k] == new_types[k];
    }
    if (in.rfind("field:", 0) == 0) {
      std::string qualified = in.substr(6);
      auto dot = qualified.find('.');
      const ClassDecl *c = old_snap.find_class(qualified.substr(0, dot));
      return c && c->find_field(qualified.substr(dot + 1));
    }
    return false;
  };

  for (int n : mismatched) {
    const SummaryStatement *s = new_slice.statement(n);
    if (!s)
      continue;
    if (s->linked_inputs.empty())
      return true;
    for (const auto &in : s->linked_inputs)
      if (input_in_old(in))
        return true;
  }
  return false;
}

namespace {

/// Per-method facts for lifting carriers from a callee to its caller.
struct CallerFacts {
  const MethodIR *method = nullptr;
  FlowGraph flow;
  Pdg pdg;
  std::vector<std::set<std::string>> reaches; // outputs each statement reaches
};

CallerFacts caller_facts(const MethodIR &m) {
  CallerFacts f;
  f.method = &m;
  f.flow = method_flow_graph(m);
  f.pdg = build_pdg(m);
  const std::size_t n = m.statement_count();
  std::vector<std::vector<int>> back(n);
  for (const auto &e : f.pdg.data_edges)
    back[e.use].push_back(e.def);
  for (const auto &c : f.pdg.control_edges)
    back[c.dependent].push_back(c.branch);

  std::map<std::string, int> param_local;
  for (std::size_t k = 0; k < m.params.size(); ++k)
    param_local[m.params[k]] = static_cast<int>(k);

  f.reaches.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Statement *s = m.statement(static_cast<int>(i));
    std::string name;
    if (s->kind == StmtKind::Return && !s->uses.empty())
      name = "return";
    else if (s->kind == StmtKind::FieldStore && !s->field.on_object)
      name = "field:" + s->field.owner + "." + s->field.field;
    else if (s->kind == StmtKind::FieldStore && param_local.count(s->field.owner))
      name = "object:param(" + std::to_string(param_local[s->field.owner]) +
             ")." + s->field.field;
    else if (s->kind == StmtKind::Throw && f.flow.nodes[i].succ.empty())
      name = "throw:" + s->type_name;
    if (name.empty())
      continue;
    std::vector<bool> seen(n, false);
    std::vector<int> stack{static_cast<int>(i)};
    seen[i] = true;
    while (!stack.empty()) {
      int k = stack.back();
      stack.pop_back();
      f.reaches[k].insert(name);
      for (int p : back[k])
        if (!seen[p]) {
          seen[p] = true;
          stack.push_back(p);
        }
    }
  }
  return f;
}

std::set<std::string> lift(const CallerFacts &f, const std::string &callee,
                           const std::set<std::string> &carriers) {
  const MethodIR &m = *f.method;
  std::set<std::string> out;
  for (std::size_t b = 0; b < m.blocks.size(); ++b)
    for (const auto &s : m.blocks[b].stmts) {
      if (s.kind != StmtKind::Call || s.callee->key() != callee)
        continue;
      for (const auto &c : carriers) {
        if (c == "return") {
          if (s.def)
            out.insert(f.reaches[s.id].begin(), f.reaches[s.id].end());
        } else if (c.rfind("field:", 0) == 0) {
          out.insert(c);
        } else if (c.rfind("object:param(", 0) == 0) {
          std::size_t k = std::stoul(c.substr(13));
          auto dot = c.find(").");
          std::string field = c.substr(dot + 2);
          if (k >= s.uses.size() || !s.uses[k].is_local())
            continue;
          const std::string &arg = s.uses[k].name;
          // The caller observes the mutation wherever it later reads the
          // object, or forwards it if the object is one of its own params.
          for (std::size_t p = 0; p < m.params.size(); ++p)
            if (m.params[p] == arg)
              out.insert("object:param(" + std::to_string(p) + ")." + field);
          for (std::size_t i = 0; i < m.statement_count(); ++i) {
            const Statement *u = m.statement(static_cast<int>(i));
            if (u->id == s.id)
              continue;
            for (const auto &op : u->uses)
              if (op.is_local() && op.name == arg)
                out.insert(f.reaches[i].begin(), f.reaches[i].end());
          }
        } else if (c.rfind("throw:", 0) == 0) {
          std::string type = c.substr(6);
          bool caught = false;
          for (const auto &r : m.try_regions)
            caught = caught || (region_covers(m, r, static_cast<int>(b)) &&
                                exception_matches(r.exception_type, type));
          if (!caught)
            out.insert(c);
        }
      }
    }
  return out;
}

} // namespace

bool check_propagatability(const ModuleSnapshot &new_snap,
                           const CallGraph &cg_new, const ClusterPair &cluster,
                           const ClusterSlice &new_slice,
                           const std::set<int> &mismatched,
                           std::size_t max_paths) {
  if (!cluster.root_new || !cg_new.contains(*cluster.root_new))
    return false;
  std::set<std::string> carriers;
  if (mismatched.empty()) {
    for (const auto &o : new_slice.relations.outputs)
      carriers.insert(o.name);
  } else {
    for (int n : mismatched)
      if (const SummaryStatement *s = new_slice.statement(n))
        carriers.insert(s->outputs.begin(), s->outputs.end());
  }
  if (carriers.empty())
    return false;
  const std::string &root = *cluster.root_new;
  if (root == cg_new.api)
    return true;

  std::vector<CallPath> paths;
  try {
    paths = all_call_paths(cg_new, cg_new.api, root, max_paths);
  } catch (const NoPathError &) {
    return false;
  }
  std::map<std::string, CallerFacts> facts;
  for (const auto &path : paths) {
    std::set<std::string> c = carriers;
    for (std::size_t j = path.size() - 1; j > 0 && !c.empty(); --j) {
      const std::string &caller = path[j - 1];
      auto it = facts.find(caller);
      if (it == facts.end())
        it = facts.emplace(caller, caller_facts(*new_snap.find_method(caller)))
                 .first;
      c = lift(it->second, path[j], c);
    }
    if (!c.empty())
      return true;
  }
  return false;
}

namespace {

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

} // namespace

ApiVerdict assess_api(const ApiPair &pair, const ModuleSnapshot &old_snap,
                      const ModuleSnapshot &new_snap,
                      const AnalysisConfig &cfg, bool keep_detail) {
  cfg.validate();
  ApiVerdict v;
  v.api = pair.key();
  CallGraph cg_old = build_call_graph(old_snap, pair.old_sig.key(), cfg.depth_cap);
  CallGraph cg_new = build_call_graph(new_snap, pair.new_sig.key(), cfg.depth_cap);
  auto cls = classify_methods(old_snap, cg_old, new_snap, cg_new);
  auto clusters = group_clusters(pair, cg_old, cg_new, cls.changed);
  if (clusters.empty()) {
    v.status = ApiStatus::Unchanged;
    v.evidence.push_back("no changed method reachable from the API");
    return v;
  }

  bool breaking = false;
  for (const auto &c : clusters) {
    ClusterSlice old_slice, new_slice;
    if (c.root_old)
      old_slice = slice_cluster(old_snap, *c.root_old, c.old_members,
                                cfg.depth_cap);
    if (c.root_new)
      new_slice = slice_cluster(new_snap, *c.root_new, c.new_members,
                                cfg.depth_cap);
    BenignSet benign =
        collect_benign({old_snap, new_snap, old_slice, new_slice});
    SemanticGraph g_old = semantic_graph_of(old_slice);
    SemanticGraph g_new = semantic_graph_of(new_slice, benign.nodes());
    KernelResult kr = kernel_distance(g_old, g_new, cfg.kernel);
    auto mismatched = mismatched_new_nodes(kr, g_new);

    ClusterVerdict cv;
    cv.id = c.id;
    cv.k = kr.k;
    cv.is_semb = kr.is_semb;
    cv.triggerable = check_triggerability(old_snap, c, new_slice, mismatched);
    cv.propagatable = check_propagatability(new_snap, cg_new, c, new_slice,
                                            mismatched, cfg.max_paths);

    std::string root = c.root_new ? *c.root_new : *c.root_old;
    std::string head = "cluster " + std::to_string(c.id) + " (root " + root +
                       ", " + std::to_string(c.old_members.size()) + " old/" +
                       std::to_string(c.new_members.size()) + " new members)";
    v.evidence.push_back(head + ": K=" + fixed(kr.k) +
                         (kr.is_semb ? " > " : " <= ") + "T=" +
                         fixed(cfg.kernel.threshold) + ", " +
                         std::to_string(benign.size()) + " benign node(s)");
    if (kr.is_semb) {
      v.evidence.push_back(head + ": " +
                           (cv.triggerable ? "triggerable by old inputs"
                                           : "not triggerable by old inputs"));
      v.evidence.push_back(head + ": " +
                           (cv.propagatable ? "propagates to the API output"
                                            : "does not reach the API output"));
    }
    breaking = breaking || (cv.is_semb && cv.triggerable && cv.propagatable);

    if (keep_detail) {
      ClusterDetail d;
      d.old_members = c.old_members;
      d.new_members = c.new_members;
      d.old_summaries = old_slice.summaries;
      d.new_summaries = new_slice.summaries;
      for (const auto &[node, tag] : benign.entries)
        d.benign.push_back({new_slice.label(node), tag});
      d.kernel = kr;
      cv.detail = std::move(d);
    }
    v.clusters.push_back(std::move(cv));
  }
  v.status = breaking ? ApiStatus::SemB : ApiStatus::ChangedCompatible;
  return v;
}

} // namespace semverdiff
