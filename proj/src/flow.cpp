//===- flow.cpp - Statement-level dataflow primitives ---------------------===//

#include "semverdiff/flow.hpp"

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <deque>
#include <map>

namespace semverdiff {

std::vector<std::vector<int>> FlowGraph::predecessors() const {
  std::vector<std::vector<int>> preds(nodes.size());
  for (std::size_t n = 0; n < nodes.size(); ++n)
    for (int s : nodes[n].succ)
      if (std::find(preds[s].begin(), preds[s].end(), static_cast<int>(n)) ==
          preds[s].end())
        preds[s].push_back(static_cast<int>(n));
  return preds;
}

namespace {

struct DefSite {
  int node; // -1 for the entry pseudo-definition
  std::string var;
  bool weak = false;
};

} // namespace

ReachingDefs reaching_definitions(const FlowGraph &g) {
  const std::size_t n = g.size();
  std::vector<DefSite> defs;
  std::map<std::string, std::vector<std::size_t>> defs_of;
  auto add_def = [&](int node, const std::string &var, bool weak = false) {
    defs_of[var].push_back(defs.size());
    defs.push_back({node, var, weak});
  };

  std::set<std::string> vars;
  for (const auto &node : g.nodes) {
    vars.insert(node.uses.begin(), node.uses.end());
    vars.insert(node.address_uses.begin(), node.address_uses.end());
    vars.insert(node.strong_defs.begin(), node.strong_defs.end());
    vars.insert(node.weak_defs.begin(), node.weak_defs.end());
  }
  for (const auto &v : vars)
    add_def(-1, v);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto &v : g.nodes[i].strong_defs)
      add_def(static_cast<int>(i), v);
    for (const auto &v : g.nodes[i].weak_defs)
      add_def(static_cast<int>(i), v, true);
  }

  const std::size_t d = defs.size();
  std::vector<boost::dynamic_bitset<>> gen(n, boost::dynamic_bitset<>(d));
  std::vector<boost::dynamic_bitset<>> kill(n, boost::dynamic_bitset<>(d));
  for (std::size_t k = 0; k < d; ++k) {
    if (defs[k].node < 0)
      continue;
    gen[defs[k].node].set(k);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (const auto &v : g.nodes[i].strong_defs)
      for (std::size_t k : defs_of[v])
        if (defs[k].node != static_cast<int>(i))
          kill[i].set(k);

  boost::dynamic_bitset<> entry_in(d);
  for (std::size_t k = 0; k < d; ++k)
    if (defs[k].node < 0)
      entry_in.set(k);

  std::vector<std::vector<int>> preds(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int s : g.nodes[i].succ)
      preds[s].push_back(static_cast<int>(i));
    for (int s : g.nodes[i].exc_succ)
      preds[s].push_back(static_cast<int>(i));
  }

  std::vector<boost::dynamic_bitset<>> in(n, boost::dynamic_bitset<>(d));
  std::vector<boost::dynamic_bitset<>> out(n, boost::dynamic_bitset<>(d));
  std::deque<int> work;
  std::vector<bool> queued(n, true);
  for (std::size_t i = 0; i < n; ++i)
    work.push_back(static_cast<int>(i));
  while (!work.empty()) {
    int i = work.front();
    work.pop_front();
    queued[i] = false;
    boost::dynamic_bitset<> next_in(d);
    if (i == g.entry)
      next_in |= entry_in;
    for (int p : preds[i])
      next_in |= out[p];
    in[i] = next_in;
    boost::dynamic_bitset<> next_out = gen[i] | (next_in - kill[i]);
    if (next_out == out[i])
      continue;
    out[i] = std::move(next_out);
    for (int s : g.nodes[i].succ)
      if (!queued[s]) {
        queued[s] = true;
        work.push_back(s);
      }
    for (int s : g.nodes[i].exc_succ)
      if (!queued[s]) {
        queued[s] = true;
        work.push_back(s);
      }
  }

  ReachingDefs rd;
  rd.from_entry.resize(n);
  std::set<DataEdge> edges;
  auto reach = [&](std::size_t i, const std::string &v, bool address) {
    for (std::size_t k : defs_of[v]) {
      if (!in[i].test(k) || (address && defs[k].weak))
        continue;
      if (defs[k].node < 0)
        rd.from_entry[i].insert(v);
      else
        edges.insert({defs[k].node, static_cast<int>(i), v});
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto &v : g.nodes[i].uses)
      reach(i, v, false);
    for (const auto &v : g.nodes[i].address_uses)
      reach(i, v, true);
  }
  rd.edges.assign(edges.begin(), edges.end());
  return rd;
}

std::vector<std::vector<bool>> post_dominators(const FlowGraph &g) {
  const int n = static_cast<int>(g.size());
  const int exit = n;
  std::vector<std::vector<int>> succ(n + 1);
  for (int i = 0; i < n; ++i) {
    succ[i] = g.nodes[i].succ;
    if (g.nodes[i].exits)
      succ[i].push_back(exit);
  }

  auto reverse_reach = [&](const std::vector<int> &seeds) {
    std::vector<std::vector<int>> preds(n + 1);
    for (int i = 0; i <= n; ++i)
      for (int s : succ[i])
        preds[s].push_back(i);
    std::vector<bool> seen(n + 1, false);
    std::vector<int> stack = seeds;
    for (int s : seeds)
      seen[s] = true;
    while (!stack.empty()) {
      int k = stack.back();
      stack.pop_back();
      for (int p : preds[k])
        if (!seen[p]) {
          seen[p] = true;
          stack.push_back(p);
        }
    }
    return seen;
  };

  // Nodes trapped in a cycle with no way out get a virtual exit edge so the
  // analysis still has something to post-dominate them.
  std::vector<int> sinks;
  for (int i = 0; i < n; ++i)
    if (succ[i].empty())
      sinks.push_back(i);
  sinks.push_back(exit);
  std::vector<bool> escapes = reverse_reach(sinks);
  for (int i = 0; i < n; ++i)
    if (!escapes[i]) {
      bool feeds_trap = false;
      for (int s : succ[i])
        feeds_trap = feeds_trap || !escapes[s];
      if (feeds_trap && std::none_of(succ[i].begin(), succ[i].end(),
                                     [&](int s) { return escapes[s]; }))
        succ[i].push_back(exit);
    }

  std::vector<bool> reaches_exit = reverse_reach({exit});
  std::vector<std::vector<int>> eff(n + 1);
  for (int i = 0; i < n; ++i) {
    for (int s : succ[i])
      if (reaches_exit[s])
        eff[i].push_back(s);
    if (eff[i].empty())
      eff[i] = succ[i];
  }

  std::vector<std::vector<bool>> pdom(n + 1, std::vector<bool>(n + 1, true));
  pdom[exit].assign(n + 1, false);
  pdom[exit][exit] = true;
  for (int i = 0; i < n; ++i)
    if (eff[i].empty()) {
      pdom[i].assign(n + 1, false);
      pdom[i][i] = true;
    }

  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = n - 1; i >= 0; --i) {
      if (eff[i].empty())
        continue;
      std::vector<bool> next(n + 1, true);
      for (int s : eff[i])
        for (int k = 0; k <= n; ++k)
          next[k] = next[k] && pdom[s][k];
      next[i] = true;
      if (next != pdom[i]) {
        pdom[i] = std::move(next);
        changed = true;
      }
    }
  }
  return pdom;
}

std::vector<ControlDep> control_dependences(const FlowGraph &g) {
  const int n = static_cast<int>(g.size());
  auto pdom = post_dominators(g);
  std::set<ControlDep> out;
  for (int x = 0; x < n; ++x) {
    const auto &node = g.nodes[x];
    if (!node.is_branch || node.succ.size() < 2)
      continue;
    for (std::size_t k = 0; k < node.succ.size(); ++k) {
      int s = node.succ[k];
      for (int y = 0; y < n; ++y) {
        if (!pdom[s][y])
          continue;
        // y post-dominates this successor but not x itself (x may depend on
        // itself through a loop).
        if (pdom[x][y] && y != x)
          continue;
        out.insert({x, static_cast<int>(k), y});
      }
    }
  }
  return {out.begin(), out.end()};
}

std::vector<int> straight_line_chains(const FlowGraph &g,
                                      std::vector<int> *position) {
  const int n = static_cast<int>(g.size());
  auto preds = g.predecessors();
  auto is_leader = [&](int i) {
    if (i == g.entry || preds[i].size() != 1)
      return true;
    return g.nodes[preds[i][0]].succ.size() != 1;
  };

  std::vector<int> chain(n, -1);
  std::vector<int> pos(n, 0);
  int next_id = 0;
  auto grow = [&](int start) {
    int id = next_id++;
    int cur = start;
    int k = 0;
    while (chain[cur] < 0) {
      chain[cur] = id;
      pos[cur] = k++;
      const auto &succ = g.nodes[cur].succ;
      if (succ.size() != 1 || is_leader(succ[0]))
        break;
      cur = succ[0];
    }
  };
  for (int i = 0; i < n; ++i)
    if (chain[i] < 0 && is_leader(i))
      grow(i);
  // Headless cycles (every node has one predecessor inside the cycle).
  for (int i = 0; i < n; ++i)
    if (chain[i] < 0)
      grow(i);
  if (position)
    *position = std::move(pos);
  return chain;
}

} // namespace semverdiff
