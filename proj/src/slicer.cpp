//===- slicer.cpp - Cluster flattening and dependency summaries -----------===//

#include "semverdiff/slicer.hpp"

#include "semverdiff/cfg.hpp"
#include "semverdiff/errors.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>

namespace semverdiff {

namespace {

using Resolver = std::function<std::optional<int>(const std::string &)>;

class Flattener {
public:
  Flattener(const ModuleSnapshot &snap, const std::set<std::string> &members,
            int depth_cap)
      : snap_(snap), members_(members), depth_cap_(depth_cap) {}

  FlatBody run(const std::string &root) {
    const MethodIR *m = snap_.find_method(root);
    if (!m)
      throw UnknownApiError("cluster root " + root + " not in snapshot");
    body_.root = root;
    body_.root_param_types = m->signature.param_types;
    std::vector<std::string> stack{root};
    int entry = inline_method(*m, 0, 0, stack, nullptr, std::nullopt, -1,
                              [](const std::string &) { return std::nullopt; },
                              {});
    body_.flow.entry = entry;
    finish();
    return std::move(body_);
  }

private:
  struct Pending {
    int node;
    const MethodIR *callee;
    std::vector<Operand> args;
    std::optional<std::string> def;
    int next;
    int block;
    std::vector<int> handlers;
  };

  int add_node(FlatNode n) {
    body_.nodes.push_back(std::move(n));
    succ_.emplace_back();
    exc_.emplace_back();
    return static_cast<int>(body_.nodes.size()) - 1;
  }

  int inline_method(const MethodIR &m, int ctx, int depth,
                    std::vector<std::string> &stack,
                    const std::vector<Operand> *args,
                    std::optional<std::string> ret_def, int ret_point,
                    Resolver resolve, std::vector<int> outer_handlers) {
    const std::string key = m.signature.key();
    const std::string suffix = "@" + std::to_string(ctx);
    auto local = [&](const std::string &n) { return n + suffix; };

    const int base = static_cast<int>(body_.nodes.size());
    for (std::size_t i = 0; i < m.statement_count(); ++i) {
      FlatNode n;
      n.method = key;
      n.stmt_id = static_cast<int>(i);
      n.ctx = ctx;
      n.stmt = *m.statement(static_cast<int>(i));
      for (auto &u : n.stmt.uses)
        if (u.is_local())
          u.name = local(u.name);
      if (n.stmt.def)
        n.stmt.def = local(*n.stmt.def);
      if (n.stmt.field.on_object)
        n.stmt.field.owner = local(n.stmt.field.owner);
      add_node(std::move(n));
    }
    for (const auto &r : m.try_regions)
      body_.handlers.push_back({key, r.exception_type,
                                base + block_head(m, m.block_index(r.handler))});

    std::vector<Pending> pending;
    for (std::size_t b = 0; b < m.blocks.size(); ++b) {
      const auto &stmts = m.blocks[b].stmts;
      std::vector<int> handlers;
      for (const auto &r : m.try_regions)
        if (region_covers(m, r, static_cast<int>(b)))
          handlers.push_back(base + block_head(m, m.block_index(r.handler)));
      std::vector<int> all_handlers = handlers;
      all_handlers.insert(all_handlers.end(), outer_handlers.begin(),
                          outer_handlers.end());

      for (std::size_t j = 0; j < stmts.size(); ++j) {
        const Statement &s = stmts[j];
        const int idx = base + s.id;
        int next = -1;
        if (!s.is_terminator())
          next = j + 1 < stmts.size()
                     ? base + stmts[j + 1].id
                     : base + block_head(m, static_cast<int>(b) + 1);
        FlatNode &node = body_.nodes[idx];

        switch (s.kind) {
        case StmtKind::ParamBind:
          if (args) {
            node.role = FlatRole::Copy;
            node.stmt.uses = {(*args)[s.param_index]};
          }
          succ_[idx].push_back(next);
          break;
        case StmtKind::Return:
          if (ret_point < 0)
            break;
          if (ret_def && !node.stmt.uses.empty()) {
            node.role = FlatRole::Copy;
            node.stmt.def = ret_def;
          } else {
            node.role = FlatRole::Nop;
            node.stmt.uses.clear();
          }
          succ_[idx].push_back(ret_point);
          break;
        case StmtKind::Throw: {
          std::optional<int> target;
          for (const auto &r : m.try_regions)
            if (region_covers(m, r, static_cast<int>(b)) &&
                exception_matches(r.exception_type, s.type_name)) {
              target = base + block_head(m, m.block_index(r.handler));
              break;
            }
          if (!target)
            target = resolve(s.type_name);
          if (target) {
            node.caught_throw = true;
            succ_[idx].push_back(*target);
          }
          break;
        }
        case StmtKind::Branch:
          succ_[idx].push_back(base + block_head(m, m.block_index(s.target)));
          succ_[idx].push_back(base +
                               block_head(m, m.block_index(s.else_target)));
          break;
        case StmtKind::Goto:
          succ_[idx].push_back(base + block_head(m, m.block_index(s.target)));
          break;
        case StmtKind::Call: {
          const std::string callee_key = s.callee->key();
          const MethodIR *callee = snap_.find_method(callee_key);
          bool inline_it =
              callee && members_.count(callee_key) &&
              std::find(stack.begin(), stack.end(), callee_key) == stack.end();
          if (inline_it) {
            node.role = FlatRole::Nop;
            pending.push_back({idx, callee, node.stmt.uses, node.stmt.def,
                               next, static_cast<int>(b), all_handlers});
          } else {
            exc_[idx] = all_handlers;
            succ_[idx].push_back(next);
          }
          break;
        }
        default:
          succ_[idx].push_back(next);
        }
      }
    }

    for (auto &p : pending) {
      if (depth + 1 > depth_cap_)
        throw RecursionLimitError("inlining " + p.callee->signature.key() +
                                  " exceeds depth cap " +
                                  std::to_string(depth_cap_));
      FlatNode rp;
      rp.role = FlatRole::Nop;
      rp.method = key;
      rp.stmt_id = body_.nodes[p.node].stmt_id;
      rp.ctx = ctx;
      rp.stmt.kind = StmtKind::Goto;
      int ret = add_node(std::move(rp));
      succ_[ret].push_back(p.next);

      const MethodIR *mp = &m;
      int block = p.block;
      Resolver child = [mp, base, block, resolve](const std::string &type)
          -> std::optional<int> {
        for (const auto &r : mp->try_regions)
          if (region_covers(*mp, r, block) &&
              exception_matches(r.exception_type, type))
            return base + block_head(*mp, mp->block_index(r.handler));
        return resolve(type);
      };
      const int callee_ctx = ++next_ctx_;
      for (std::size_t k = 0; k < p.args.size(); ++k)
        if (p.args[k].is_local() && k < p.callee->params.size() &&
            !p.callee->params[k].empty() &&
            is_mutable_reference(p.callee->signature.param_types[k]))
          writeback_[ret].push_back(
              {p.callee->params[k] + "@" + std::to_string(callee_ctx),
               p.args[k].name});
      stack.push_back(p.callee->signature.key());
      int entry = inline_method(*p.callee, callee_ctx, depth + 1, stack,
                                &p.args, p.def, ret, child, p.handlers);
      stack.pop_back();
      succ_[p.node] = {entry};
    }
    return base + block_head(m, 0);
  }

  void finish() {
    const std::size_t n = body_.nodes.size();
    auto &flow = body_.flow.nodes;
    flow.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const FlatNode &fn = body_.nodes[i];
      FlowNode &node = flow[i];
      node.succ = succ_[i];
      node.exc_succ = exc_[i];
      if (auto wb = writeback_.find(static_cast<int>(i)); wb != writeback_.end())
        for (const auto &[from, to] : wb->second) {
          node.uses.push_back(from);
          node.weak_defs.push_back(to);
        }
      if (fn.role == FlatRole::Nop)
        continue;
      const Statement &s = fn.stmt;
      for (std::size_t k = 0; k < s.uses.size(); ++k)
        if (s.uses[k].is_local())
          (k == 0 && s.stores_through() ? node.address_uses : node.uses)
              .push_back(s.uses[k].name);
      if (s.def)
        node.strong_defs.push_back(*s.def);
      if (fn.role == FlatRole::Copy)
        continue;
      if (s.kind == StmtKind::Call)
        for (std::size_t k = 0; k < s.uses.size(); ++k)
          if (s.uses[k].is_local() &&
              may_mutate_argument(*s.callee, k))
            node.weak_defs.push_back(s.uses[k].name);
      if (s.kind == StmtKind::FieldLoad && !s.field.on_object)
        node.uses.push_back(field_var(s.field.owner, s.field.field));
      if (s.kind == StmtKind::FieldStore) {
        if (s.field.on_object)
          node.weak_defs.push_back(s.field.owner);
        else
          node.strong_defs.push_back(field_var(s.field.owner, s.field.field));
      }
      node.is_branch = s.kind == StmtKind::Branch;
      node.exits = s.kind == StmtKind::Return;
    }

    body_.normal_reach.assign(n, false);
    std::vector<int> stack{body_.flow.entry};
    body_.normal_reach[body_.flow.entry] = true;
    while (!stack.empty()) {
      int k = stack.back();
      stack.pop_back();
      if (body_.nodes[k].caught_throw)
        continue;
      for (int s : flow[k].succ)
        if (!body_.normal_reach[s]) {
          body_.normal_reach[s] = true;
          stack.push_back(s);
        }
    }
  }

  const ModuleSnapshot &snap_;
  const std::set<std::string> &members_;
  int depth_cap_;
  int next_ctx_ = 0;
  FlatBody body_;
  std::vector<std::vector<int>> succ_;
  std::vector<std::vector<int>> exc_;
  // Return points of inlined calls: callee parameter locals flow back into
  // the caller's mutable arguments.
  std::map<int, std::vector<std::pair<std::string, std::string>>> writeback_;
};

bool is_commutative(const std::string &op) {
  return op == "add" || op == "mul" || op == "and" || op == "or" ||
         op == "xor" || op == "eq" || op == "ne";
}

std::string mirror_relop(const std::string &op) {
  if (op == "lt") return "gt";
  if (op == "gt") return "lt";
  if (op == "le") return "ge";
  if (op == "ge") return "le";
  return op;
}

/// Everything the summary construction needs about one flat body.
class SliceBuilder {
public:
  SliceBuilder(const ModuleSnapshot &snap, FlatBody body)
      : snap_(snap), body_(std::move(body)) {
    n_ = static_cast<int>(body_.nodes.size());
    rd_ = reaching_definitions(body_.flow);
    in_edges_.resize(n_);
    out_edges_.resize(n_);
    for (const auto &e : rd_.edges) {
      in_edges_[e.use].push_back(e);
      out_edges_[e.def].push_back(e);
    }
    cd_preds_.resize(n_);
    for (const auto &c : control_dependences(body_.flow))
      cd_preds_[c.dependent].push_back(c);
  }

  ClusterSlice build() {
    find_outputs();
    compute_slice();
    compute_linked_inputs();
    assemble();
    ClusterSlice out;
    out.body = std::move(body_);
    out.summaries = std::move(sums_);
    out.relations = std::move(rel_);
    out.labels = std::move(labels_);
    out.all_statements = std::move(all_);
    return out;
  }

private:
  const FlatNode &fn(int i) const { return body_.nodes[i]; }
  bool real(int i, StmtKind k) const {
    return fn(i).role == FlatRole::Real && fn(i).stmt.kind == k;
  }

  /// Definitions of `var` reaching node `use`, seen through copies and
  /// through stores into the same object.
  void origins(int use, const std::string &var, std::set<int> &out,
               std::set<std::pair<int, std::string>> &seen) const {
    if (!seen.insert({use, var}).second)
      return;
    for (const auto &e : in_edges_[use]) {
      if (e.var != var)
        continue;
      const FlatNode &d = fn(e.def);
      if (d.role == FlatRole::Copy) {
        const Operand &src = d.stmt.uses.front();
        if (src.is_local())
          origins(e.def, src.name, out, seen);
        else
          out.insert(e.def);
      } else if (d.role == FlatRole::Nop) {
        // Return point of an inlined call: the object comes back from the
        // callee parameter paired with it.
        const FlowNode &f = body_.flow.nodes[e.def];
        for (std::size_t k = 0; k < f.weak_defs.size(); ++k)
          if (f.weak_defs[k] == var)
            origins(e.def, f.uses[k], out, seen);
      } else if (d.role == FlatRole::Real && !(d.stmt.def && *d.stmt.def == var) &&
                 (d.stmt.kind == StmtKind::FieldStore ||
                  d.stmt.kind == StmtKind::Call)) {
        // A store into the object or a call that may mutate it keeps the
        // object's identity.
        origins(e.def, var, out, seen);
      } else {
        out.insert(e.def);
      }
    }
  }

  std::set<int> origins(int use, const std::string &var) const {
    std::set<int> out;
    std::set<std::pair<int, std::string>> seen;
    origins(use, var, out, seen);
    return out;
  }

  std::string role(int node, const Operand &op) const {
    if (!op.is_local())
      return op.text();
    std::set<std::string> kinds;
    for (int d : origins(node, op.name)) {
      const FlatNode &o = fn(d);
      if (o.role == FlatRole::Copy) {
        kinds.insert(o.stmt.uses.front().text());
      } else if (o.stmt.kind == StmtKind::ParamBind && o.ctx == 0) {
        kinds.insert("param(" + std::to_string(o.stmt.param_index) + ")");
      } else if (o.stmt.kind == StmtKind::FieldLoad && !o.stmt.field.on_object) {
        kinds.insert("field(" + o.stmt.field.owner + "." + o.stmt.field.field +
                     ")");
      } else {
        kinds.insert("var");
      }
    }
    return kinds.size() == 1 ? *kinds.begin() : std::string("var");
  }

  std::string owner_type(int node, const std::string &owner) const {
    std::set<std::string> types;
    for (int d : origins(node, owner)) {
      const FlatNode &o = fn(d);
      if (o.role != FlatRole::Real)
        continue;
      if (o.stmt.kind == StmtKind::NewObject)
        types.insert(o.stmt.type_name);
      else if (o.stmt.kind == StmtKind::ParamBind && o.ctx == 0 &&
               o.stmt.param_index < static_cast<int>(
                                        body_.root_param_types.size()))
        types.insert(body_.root_param_types[o.stmt.param_index]);
      else if (o.stmt.kind == StmtKind::Call)
        types.insert(o.stmt.callee->return_type);
      else if (o.stmt.kind == StmtKind::FieldLoad && !o.stmt.field.on_object)
        if (const ClassDecl *c = snap_.find_class(o.stmt.field.owner))
          if (const FieldDecl *f = c->find_field(o.stmt.field.field))
            types.insert(f->type);
    }
    return types.size() == 1 ? *types.begin() : std::string();
  }

  void find_outputs() {
    for (int i = 0; i < n_; ++i) {
      const FlatNode &f = fn(i);
      if (f.role != FlatRole::Real)
        continue;
      const Statement &s = f.stmt;
      if (s.kind == StmtKind::Return && f.ctx == 0 && !s.uses.empty()) {
        rel_.outputs.push_back({i, "return", "", ""});
      } else if (s.kind == StmtKind::FieldStore && !s.field.on_object) {
        rel_.outputs.push_back({i, "field:" + s.field.owner + "." + s.field.field,
                                s.field.owner, s.field.field});
      } else if (s.kind == StmtKind::FieldStore) {
        for (int d : origins(i, s.field.owner)) {
          const FlatNode &o = fn(d);
          if (o.role == FlatRole::Real && o.stmt.kind == StmtKind::ParamBind &&
              o.ctx == 0) {
            rel_.outputs.push_back(
                {i,
                 "object:param(" + std::to_string(o.stmt.param_index) + ")." +
                     s.field.field,
                 owner_type(i, s.field.owner), s.field.field});
            break;
          }
        }
      } else if (s.kind == StmtKind::Throw && !f.caught_throw) {
        rel_.outputs.push_back({i, "throw:" + s.type_name, "", ""});
      }
    }
  }

  template <class Fn>
  std::vector<bool> closure(const std::vector<int> &seeds, bool with_control,
                            Fn &&visit) const {
    std::vector<bool> in(n_, false);
    std::vector<int> stack;
    for (int s : seeds)
      if (!in[s]) {
        in[s] = true;
        stack.push_back(s);
      }
    while (!stack.empty()) {
      int k = stack.back();
      stack.pop_back();
      visit(k);
      auto push = [&](int p) {
        if (!in[p]) {
          in[p] = true;
          stack.push_back(p);
        }
      };
      for (const auto &e : in_edges_[k])
        push(e.def);
      if (with_control)
        for (const auto &c : cd_preds_[k])
          push(c.branch);
    }
    return in;
  }

  void compute_slice() {
    outputs_of_.assign(n_, {});
    std::vector<int> seeds;
    for (const auto &o : rel_.outputs) {
      seeds.push_back(o.node);
      closure({o.node}, true, [&](int k) { outputs_of_[k].insert(o.name); });
    }
    in_slice_ = closure(seeds, true, [](int) {});

    folded_.assign(n_, false);
    for (int i = 0; i < n_; ++i) {
      if (!real(i, StmtKind::RelOpAssign) || out_edges_[i].empty())
        continue;
      folded_[i] = std::all_of(out_edges_[i].begin(), out_edges_[i].end(),
                               [&](const DataEdge &e) {
                                 return real(e.use, StmtKind::Branch);
                               });
    }

    std::vector<int> data_seeds;
    for (const auto &o : rel_.outputs)
      if (!real(o.node, StmtKind::Throw))
        data_seeds.push_back(o.node);
    dds_mask_ = closure(data_seeds, false, [](int) {});
  }

  bool transparent(int i) const {
    return fn(i).role != FlatRole::Real || folded_[i] ||
           fn(i).stmt.kind == StmtKind::Goto;
  }

  void compute_linked_inputs() {
    linked_.assign(n_, {});
    for (int i = 0; i < n_; ++i) {
      if (!in_slice_[i] || fn(i).role != FlatRole::Real)
        continue;
      const Statement &s = fn(i).stmt;
      if (s.kind == StmtKind::ParamBind && fn(i).ctx == 0)
        linked_[i].insert("param:" + std::to_string(s.param_index));
      if (s.kind == StmtKind::FieldLoad && !s.field.on_object &&
          rd_.from_entry[i].count(field_var(s.field.owner, s.field.field)))
        linked_[i].insert("field:" + s.field.owner + "." + s.field.field);
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (int i = 0; i < n_; ++i) {
        if (!in_slice_[i])
          continue;
        auto before = linked_[i].size();
        for (const auto &e : in_edges_[i])
          linked_[i].insert(linked_[e.def].begin(), linked_[e.def].end());
        for (const auto &c : cd_preds_[i])
          linked_[i].insert(linked_[c.branch].begin(), linked_[c.branch].end());
        changed = changed || linked_[i].size() != before;
      }
    }
  }

  std::string normalize(int i, std::set<std::string> &roles) const {
    const Statement &s = fn(i).stmt;
    auto r = [&](const Operand &op) {
      std::string t = role(i, op);
      if (t == "var")
        roles.insert("var");
      else if (t.rfind("param(", 0) == 0)
        roles.insert("parameter");
      else if (t.rfind("field(", 0) == 0)
        roles.insert("field");
      return t;
    };
    std::string lhs = s.def ? "var = " : "";
    if (s.def)
      roles.insert("var");
    switch (s.kind) {
    case StmtKind::ConstAssign:
      return lhs + "const " + s.uses.front().text();
    case StmtKind::BinOp:
    case StmtKind::RelOpAssign: {
      std::string a = r(s.uses[0]), b = r(s.uses[1]);
      if (s.kind == StmtKind::RelOpAssign)
        return lhs + canonical_predicate(s.op, a, b);
      if (is_commutative(s.op) && b < a)
        std::swap(a, b);
      return lhs + s.op + " " + a + ", " + b;
    }
    case StmtKind::Call: {
      roles.insert("external_call");
      std::string out = lhs + "call " + s.callee->str();
      for (std::size_t k = 0; k < s.uses.size(); ++k)
        out += (k ? ", " : " ") + r(s.uses[k]);
      return out;
    }
    case StmtKind::NewObject:
      return lhs + "new " + s.type_name;
    case StmtKind::FieldLoad:
      if (!s.field.on_object) {
        roles.insert("field");
        return lhs + "load field(" + s.field.owner + "." + s.field.field + ")";
      }
      return lhs + "load " + r(s.uses.front()) + "->" + s.field.field;
    case StmtKind::FieldStore:
      if (!s.field.on_object) {
        roles.insert("field");
        return "field(" + s.field.owner + "." + s.field.field + ") = store " +
               r(s.uses.back());
      }
      return r(s.uses.front()) + "->" + s.field.field + " = store " +
             r(s.uses.back());
    case StmtKind::ParamBind:
      roles.insert("parameter");
      return lhs + "param(" + std::to_string(s.param_index) + ")";
    case StmtKind::Return:
      return s.uses.empty() ? "return" : "return " + r(s.uses.front());
    case StmtKind::Throw:
      return "throw " + s.type_name;
    case StmtKind::Branch:
    case StmtKind::Goto:
      break;
    }
    return to_string(s.kind);
  }

  SummaryStatement summarize(int i) const {
    SummaryStatement st;
    st.method = fn(i).method;
    st.stmt_id = fn(i).stmt_id;
    st.node = i;
    st.normalized_text = normalize(i, st.roles_used);
    st.linked_inputs = linked_[i];
    st.outputs = outputs_of_[i];
    return st;
  }

  void condition_arms(int b, std::array<std::string, 2> &arms,
                      std::set<std::string> &roles) const {
    const Operand &c = fn(b).stmt.uses.front();
    if (c.is_local()) {
      std::vector<int> defs;
      for (const auto &e : in_edges_[b])
        if (e.var == c.name)
          defs.push_back(e.def);
      if (defs.size() == 1 && folded_[defs[0]]) {
        const Statement &rs = fn(defs[0]).stmt;
        std::string a = role(defs[0], rs.uses[0]);
        std::string bb = role(defs[0], rs.uses[1]);
        for (const auto &t : {a, bb}) {
          if (t == "var")
            roles.insert("var");
          else if (t.rfind("param(", 0) == 0)
            roles.insert("parameter");
          else if (t.rfind("field(", 0) == 0)
            roles.insert("field");
        }
        arms[0] = canonical_predicate(rs.op, a, bb);
        arms[1] = canonical_predicate(negate_relop(rs.op), a, bb);
        return;
      }
    }
    std::string t = role(b, c);
    roles.insert(t == "var" ? "var"
                 : t.rfind("param(", 0) == 0 ? "parameter"
                 : t.rfind("field(", 0) == 0 ? "field"
                                             : "var");
    arms[0] = t;
    arms[1] = "!" + t;
  }

  bool node_less(int a, int b) const {
    return std::tie(fn(a).method, fn(a).stmt_id, a) <
           std::tie(fn(b).method, fn(b).stmt_id, b);
  }

  std::vector<int> sorted(std::vector<int> v) const {
    std::sort(v.begin(), v.end(),
              [&](int a, int b) { return node_less(a, b); });
    return v;
  }

  void assemble() {
    std::vector<int> conditions, dds, throws;
    for (int i = 0; i < n_; ++i) {
      if (!in_slice_[i] || transparent(i))
        continue;
      if (fn(i).stmt.kind == StmtKind::Branch)
        conditions.push_back(i);
      else if (fn(i).stmt.kind == StmtKind::Throw)
        throws.push_back(i);
      else if (dds_mask_[i])
        dds.push_back(i);
    }
    conditions = sorted(conditions);
    dds = sorted(dds);
    throws = sorted(throws);

    std::vector<bool> graph(n_, false);
    for (int i : dds)
      graph[i] = true;
    for (int i : conditions)
      graph[i] = true;
    for (int i : throws)
      graph[i] = true;

    std::vector<bool> assoc_all(n_, false);
    std::map<int, std::size_t> cond_index;
    for (int c : conditions) {
      ConditionSummary cs;
      cs.statement = summarize(c);
      condition_arms(c, cs.arms, cs.statement.roles_used);
      cs.dbs = make_dbs(cs.arms[0], cs.arms[1]);
      cs.statement.normalized_text = cs.dbs;
      std::vector<int> seeds;
      for (const auto &e : in_edges_[c])
        seeds.push_back(e.def);
      auto mask = closure(seeds, false, [](int) {});
      std::vector<int> assoc;
      for (int i = 0; i < n_; ++i)
        if (mask[i] && !transparent(i)) {
          assoc.push_back(i);
          assoc_all[i] = true;
          graph[i] = true;
        }
      for (int i : sorted(assoc))
        cs.associated_data.push_back(summarize(i));
      cond_index[c] = sums_.cds.size();
      sums_.cds.push_back(std::move(cs));
    }
    for (int i : dds)
      sums_.dds.push_back(summarize(i));
    for (int t : throws) {
      ExceptionSummary es;
      es.type = fn(t).stmt.type_name;
      es.statement = summarize(t);
      std::optional<int> guard;
      for (const auto &c : cd_preds_[t])
        if (cond_index.count(c.branch) && (!guard || c.branch < *guard))
          guard = c.branch;
      if (guard)
        es.guard = cond_index[*guard];
      sums_.es.push_back(std::move(es));
    }

    for (int i = 0; i < n_; ++i)
      if (graph[i])
        rel_.nodes.push_back(i);
    rel_.nodes = sorted(rel_.nodes);
    for (int i = 0; i < n_; ++i) {
      if (dds_mask_[i] && graph[i])
        rel_.dds_nodes.push_back(i);
      if (assoc_all[i])
        rel_.assoc_nodes.push_back(i);
    }

    for (int i : rel_.nodes) {
      auto it = cond_index.find(i);
      if (it != cond_index.end()) {
        labels_.emplace_back(i, sums_.cds[it->second].dbs);
        all_.push_back(sums_.cds[it->second].statement);
      } else {
        all_.push_back(summarize(i));
        labels_.emplace_back(i, all_.back().normalized_text);
      }
    }
    std::vector<std::size_t> order(labels_.size());
    for (std::size_t k = 0; k < order.size(); ++k)
      order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return labels_[a].first < labels_[b].first;
    });
    {
      decltype(labels_) l;
      decltype(all_) a;
      for (auto k : order) {
        l.push_back(labels_[k]);
        a.push_back(all_[k]);
      }
      labels_ = std::move(l);
      all_ = std::move(a);
    }

    // Data edges projected through transparent nodes.
    std::set<std::pair<int, int>> data;
    for (int i : rel_.nodes) {
      std::vector<int> stack;
      std::set<int> seen;
      for (const auto &e : in_edges_[i])
        stack.push_back(e.def);
      while (!stack.empty()) {
        int d = stack.back();
        stack.pop_back();
        if (!seen.insert(d).second)
          continue;
        if (graph[d]) {
          data.insert({d, i});
        } else if (transparent(d)) {
          for (const auto &e : in_edges_[d])
            stack.push_back(e.def);
        }
      }
    }
    rel_.data_edges.assign(data.begin(), data.end());

    for (int i : rel_.nodes)
      for (const auto &c : cd_preds_[i])
        if (graph[c.branch])
          rel_.guards.push_back({c.branch, c.succ_index, i});

    for (int i : rel_.nodes) {
      const Statement &s = fn(i).stmt;
      if (s.kind != StmtKind::FieldStore)
        continue;
      if (s.field.on_object)
        rel_.field_writes.push_back({i, "object", owner_type(i, s.field.owner),
                                     s.field.field});
      else
        rel_.field_writes.push_back(
            {i, "field:" + s.field.owner + "." + s.field.field, s.field.owner,
             s.field.field});
    }
    build_flow_edges(conditions);
  }

  void build_flow_edges(const std::vector<int> &conditions) {
    std::vector<bool> skel(n_, false);
    for (int c : conditions)
      skel[c] = true;

    std::vector<int> pos;
    auto chain = straight_line_chains(body_.flow, &pos);
    int chains = 0;
    for (int c : chain)
      chains = std::max(chains, c + 1);
    std::vector<std::vector<int>> members(chains);
    for (int i = 0; i < n_; ++i)
      if (skel[i])
        members[chain[i]].push_back(i);
    std::vector<std::set<int>> chain_succ(chains);
    for (int i = 0; i < n_; ++i)
      for (int s : body_.flow.nodes[i].succ)
        if (chain[s] != chain[i] || pos[s] <= pos[i])
          chain_succ[chain[i]].insert(chain[s]);

    std::set<std::pair<int, int>> edges;
    for (int c = 0; c < chains; ++c) {
      if (members[c].empty())
        continue;
      std::vector<bool> seen(chains, false);
      std::deque<int> queue(chain_succ[c].begin(), chain_succ[c].end());
      for (int q : queue)
        seen[q] = true;
      while (!queue.empty()) {
        int d = queue.front();
        queue.pop_front();
        if (!members[d].empty()) {
          for (int a : members[c])
            for (int b : members[d])
              edges.insert({a, b});
          continue;
        }
        for (int s : chain_succ[d])
          if (!seen[s]) {
            seen[s] = true;
            queue.push_back(s);
          }
      }
    }
    rel_.flow_edges.assign(edges.begin(), edges.end());
  }

  const ModuleSnapshot &snap_;
  FlatBody body_;
  int n_ = 0;
  ReachingDefs rd_;
  std::vector<std::vector<DataEdge>> in_edges_, out_edges_;
  std::vector<std::vector<ControlDep>> cd_preds_;
  std::vector<std::set<std::string>> outputs_of_;
  std::vector<std::set<std::string>> linked_;
  std::vector<bool> in_slice_, folded_, dds_mask_;

  DependencySummaries sums_;
  SliceRelations rel_;
  std::vector<std::pair<int, std::string>> labels_;
  std::vector<SummaryStatement> all_;
};

} // namespace

std::string negate_relop(const std::string &op) {
  if (op == "eq") return "ne";
  if (op == "ne") return "eq";
  if (op == "lt") return "ge";
  if (op == "ge") return "lt";
  if (op == "le") return "gt";
  if (op == "gt") return "le";
  return op;
}

std::string canonical_predicate(const std::string &op, std::string a,
                                std::string b) {
  std::string o = op;
  if (b < a) {
    std::swap(a, b);
    o = mirror_relop(op);
  }
  return o + " " + a + ", " + b;
}

std::string make_dbs(const std::string &p, const std::string &q) {
  return p < q ? "dbs{" + p + " | " + q + "}" : "dbs{" + q + " | " + p + "}";
}

FlatBody flatten_cluster(const ModuleSnapshot &snap, const std::string &root,
                         const std::set<std::string> &members,
                         int depth_cap) {
  return Flattener(snap, members, depth_cap).run(root);
}

ClusterSlice slice_cluster(const ModuleSnapshot &snap, const std::string &root,
                           const std::set<std::string> &members,
                           int depth_cap) {
  return SliceBuilder(snap, flatten_cluster(snap, root, members, depth_cap))
      .build();
}

const std::string &ClusterSlice::label(int node) const {
  auto it = std::lower_bound(
      labels.begin(), labels.end(), node,
      [](const std::pair<int, std::string> &p, int n) { return p.first < n; });
  if (it == labels.end() || it->first != node)
    throw std::out_of_range("node " + std::to_string(node) +
                            " is not a summary node");
  return it->second;
}

const SummaryStatement *ClusterSlice::statement(int node) const {
  auto it = std::lower_bound(
      all_statements.begin(), all_statements.end(), node,
      [](const SummaryStatement &s, int n) { return s.node < n; });
  if (it == all_statements.end() || it->node != node)
    return nullptr;
  return &*it;
}

} // namespace semverdiff
