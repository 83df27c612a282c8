//===- cfg.cpp - Per-method CFG and PDG -----------------------------------===//

#include "semverdiff/cfg.hpp"

#include <algorithm>
#include <functional>

namespace semverdiff {

bool exception_matches(const std::string &handler_type,
                       const std::string &thrown) {
  return handler_type == thrown || handler_type == "Exception" ||
         handler_type == "Throwable";
}

bool region_covers(const MethodIR &m, const TryRegion &r, int block) {
  return block >= m.block_index(r.start) && block <= m.block_index(r.end);
}

int block_head(const MethodIR &m, int block) {
  while (m.blocks[block].stmts.empty())
    ++block;
  return m.blocks[block].stmts.front().id;
}

std::string field_var(const std::string &cls, const std::string &field) {
  return "@" + cls + "." + field;
}

MethodCfg build_cfg(const MethodIR &m) {
  MethodCfg cfg;
  cfg.method = m.signature.key();
  const int n = static_cast<int>(m.blocks.size());
  cfg.succ.resize(n);
  cfg.exc_succ.resize(n);
  for (int b = 0; b < n; ++b) {
    const auto &blk = m.blocks[b];
    cfg.labels.push_back(blk.label);
    const Statement *last = blk.stmts.empty() ? nullptr : &blk.stmts.back();
    if (!last || !last->is_terminator()) {
      cfg.succ[b].push_back(b + 1);
    } else if (last->kind == StmtKind::Branch) {
      ++cfg.branch_count;
      cfg.succ[b].push_back(m.block_index(last->target));
      int f = m.block_index(last->else_target);
      if (f != cfg.succ[b].front())
        cfg.succ[b].push_back(f);
    } else if (last->kind == StmtKind::Goto) {
      cfg.succ[b].push_back(m.block_index(last->target));
    } else if (last->kind == StmtKind::Throw) {
      for (const auto &r : m.try_regions)
        if (region_covers(m, r, b) &&
            exception_matches(r.exception_type, last->type_name)) {
          cfg.succ[b].push_back(m.block_index(r.handler));
          break;
        }
    }
    for (const auto &r : m.try_regions)
      if (region_covers(m, r, b)) {
        int h = m.block_index(r.handler);
        if (std::find(cfg.exc_succ[b].begin(), cfg.exc_succ[b].end(), h) ==
            cfg.exc_succ[b].end())
          cfg.exc_succ[b].push_back(h);
      }
  }

  // Back edges: edges into a block still on the DFS stack.
  std::vector<int> state(n, 0);
  std::function<void(int)> dfs = [&](int b) {
    state[b] = 1;
    for (int s : cfg.succ[b]) {
      if (state[s] == 1)
        cfg.back_edges.emplace_back(b, s);
      else if (state[s] == 0)
        dfs(s);
    }
    state[b] = 2;
  };
  if (n > 0)
    dfs(0);
  for (int b = 0; b < n; ++b)
    if (state[b] == 0)
      dfs(b);
  return cfg;
}

FlowGraph method_flow_graph(const MethodIR &m) {
  FlowGraph g;
  g.nodes.resize(m.statement_count());
  for (std::size_t b = 0; b < m.blocks.size(); ++b) {
    const auto &stmts = m.blocks[b].stmts;
    std::vector<int> handlers;
    for (const auto &r : m.try_regions)
      if (region_covers(m, r, static_cast<int>(b)))
        handlers.push_back(block_head(m, m.block_index(r.handler)));

    for (std::size_t j = 0; j < stmts.size(); ++j) {
      const Statement &s = stmts[j];
      FlowNode &node = g.nodes[s.id];
      for (std::size_t k = 0; k < s.uses.size(); ++k)
        if (s.uses[k].is_local())
          (k == 0 && s.stores_through() ? node.address_uses : node.uses)
              .push_back(s.uses[k].name);
      if (s.def)
        node.strong_defs.push_back(*s.def);
      if (s.kind == StmtKind::FieldLoad && !s.field.on_object)
        node.uses.push_back(field_var(s.field.owner, s.field.field));
      if (s.kind == StmtKind::FieldStore) {
        if (s.field.on_object)
          node.weak_defs.push_back(s.field.owner);
        else
          node.strong_defs.push_back(field_var(s.field.owner, s.field.field));
      }
      if (s.kind == StmtKind::Call) {
        node.exc_succ = handlers;
        for (std::size_t k = 0; k < s.uses.size(); ++k)
          if (s.uses[k].is_local() &&
              may_mutate_argument(*s.callee, k))
            node.weak_defs.push_back(s.uses[k].name);
      }

      switch (s.kind) {
      case StmtKind::Return:
        node.exits = true;
        break;
      case StmtKind::Branch:
        node.is_branch = true;
        node.succ.push_back(block_head(m, m.block_index(s.target)));
        node.succ.push_back(block_head(m, m.block_index(s.else_target)));
        break;
      case StmtKind::Goto:
        node.succ.push_back(block_head(m, m.block_index(s.target)));
        break;
      case StmtKind::Throw:
        for (const auto &r : m.try_regions)
          if (region_covers(m, r, static_cast<int>(b)) &&
              exception_matches(r.exception_type, s.type_name)) {
            node.succ.push_back(block_head(m, m.block_index(r.handler)));
            break;
          }
        break;
      default:
        if (j + 1 < stmts.size())
          node.succ.push_back(stmts[j + 1].id);
        else
          node.succ.push_back(block_head(m, static_cast<int>(b) + 1));
      }
    }
  }
  return g;
}

Pdg build_pdg(const MethodIR &m) {
  FlowGraph g = method_flow_graph(m);
  Pdg pdg;
  pdg.method = m.signature.key();
  for (std::size_t i = 0; i < g.size(); ++i)
    pdg.nodes.push_back(static_cast<int>(i));
  pdg.data_edges = reaching_definitions(g).edges;
  pdg.control_edges = control_dependences(g);
  return pdg;
}

std::vector<bool> output_slice(const MethodIR &m, const Pdg &pdg) {
  const std::size_t n = m.statement_count();
  FlowGraph g = method_flow_graph(m);
  std::vector<std::vector<int>> back(n);
  for (const auto &e : pdg.data_edges)
    back[e.use].push_back(e.def);
  for (const auto &c : pdg.control_edges)
    back[c.dependent].push_back(c.branch);

  std::vector<bool> in(n, false);
  std::vector<int> stack;
  for (std::size_t i = 0; i < n; ++i) {
    const Statement *s = m.statement(static_cast<int>(i));
    bool output = (s->kind == StmtKind::Return && !s->uses.empty()) ||
                  s->kind == StmtKind::FieldStore ||
                  (s->kind == StmtKind::Throw && g.nodes[i].succ.empty());
    if (output) {
      in[i] = true;
      stack.push_back(static_cast<int>(i));
    }
  }
  while (!stack.empty()) {
    int k = stack.back();
    stack.pop_back();
    for (int p : back[k])
      if (!in[p]) {
        in[p] = true;
        stack.push_back(p);
      }
  }
  return in;
}

} // namespace semverdiff
