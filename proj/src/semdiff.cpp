//===- semdiff.cpp - Semantic graphs and the WL kernel distance -----------===//

#include "semverdiff/semdiff.hpp"

#include "semverdiff/errors.hpp"
#include "semverdiff/hash.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace semverdiff {

const char *to_string(EdgeKind k) {
  switch (k) {
  case EdgeKind::ControlFlow: return "control_flow";
  case EdgeKind::DataDep: return "data_dep";
  case EdgeKind::Guard: return "guard";
  }
  return "?";
}

const char *to_string(PenaltyMode m) {
  return m == PenaltyMode::PerNode ? "per-node" : "global";
}

std::optional<PenaltyMode> penalty_mode_from_string(const std::string &s) {
  if (s == "per-node")
    return PenaltyMode::PerNode;
  if (s == "global")
    return PenaltyMode::Global;
  return std::nullopt;
}

int SemanticGraph::add_node(std::string label, bool benign) {
  int id = static_cast<int>(nodes.size());
  nodes.push_back({id, std::move(label), benign, -1});
  return id;
}

void SemanticGraph::add_edge(int from, int to, EdgeKind kind,
                             std::string tag) {
  edges.push_back({from, to, kind, std::move(tag)});
}

SemanticGraph semantic_graph_of(const ClusterSlice &slice,
                                const std::set<int> &benign) {
  SemanticGraph g;
  std::map<int, int> id_of;
  for (int flat : slice.relations.nodes) {
    int id = g.add_node(slice.label(flat), benign.count(flat) != 0);
    g.nodes[id].origin = flat;
    id_of[flat] = id;
  }
  std::map<int, std::size_t> cond;
  for (std::size_t k = 0; k < slice.summaries.cds.size(); ++k)
    cond[slice.summaries.cds[k].statement.node] = k;

  std::set<SemanticEdge> edges;
  for (auto [a, b] : slice.relations.flow_edges)
    if (id_of.count(a) && id_of.count(b))
      edges.insert({id_of[a], id_of[b], EdgeKind::ControlFlow, {}});
  for (auto [a, b] : slice.relations.data_edges)
    edges.insert({id_of.at(a), id_of.at(b), EdgeKind::DataDep, {}});
  for (const auto &gd : slice.relations.guards)
    edges.insert({id_of.at(gd.branch), id_of.at(gd.node), EdgeKind::Guard,
                  slice.summaries.cds[cond.at(gd.branch)].arms[gd.arm]});
  g.edges.assign(edges.begin(), edges.end());
  return g;
}

SemanticGraph build_semantic_graph(const ClusterSlice &slice,
                                   const std::set<int> &benign) {
  if (slice.summaries.empty())
    throw EmptyClusterError("cluster rooted at " + slice.body.root +
                            " has no summaries");
  return semantic_graph_of(slice, benign);
}

std::uint64_t wl_initial_label(const std::string &label) {
  return fnv1a64(label);
}

std::string wl_neighbor_entry(const SemanticEdge &e, bool outgoing,
                              std::uint64_t neighbor_label) {
  std::string kind = to_string(e.kind);
  if (!e.tag.empty())
    kind += "[" + e.tag + "]";
  return kind + (outgoing ? ":out:" : ":in:") + hex64(neighbor_label);
}

std::uint64_t wl_compress(std::uint64_t label,
                          std::vector<std::string> neighbor_entries) {
  if (neighbor_entries.empty())
    return label;
  std::sort(neighbor_entries.begin(), neighbor_entries.end());
  std::string buf = hex64(label) + "|";
  for (std::size_t k = 0; k < neighbor_entries.size(); ++k) {
    if (k)
      buf += ",";
    buf += neighbor_entries[k];
  }
  return fnv1a64(buf);
}

std::vector<std::vector<std::uint64_t>> wl_relabel(const SemanticGraph &g,
                                                   int h) {
  if (h < 1)
    throw std::invalid_argument("WL iteration count must be at least 1");
  std::vector<std::vector<std::uint64_t>> labels(h);
  for (const auto &n : g.nodes)
    labels[0].push_back(wl_initial_label(n.label));
  for (int i = 1; i < h; ++i) {
    std::vector<std::vector<std::string>> entries(g.size());
    for (const auto &e : g.edges) {
      entries[e.from].push_back(wl_neighbor_entry(e, true, labels[i - 1][e.to]));
      entries[e.to].push_back(wl_neighbor_entry(e, false, labels[i - 1][e.from]));
    }
    for (std::size_t n = 0; n < g.size(); ++n)
      labels[i].push_back(wl_compress(labels[i - 1][n], std::move(entries[n])));
  }
  return labels;
}

void KernelConfig::validate() const {
  if (h < 1)
    throw std::invalid_argument("h must be at least 1");
  if (!(threshold > 0 && threshold < 1))
    throw std::invalid_argument("threshold must lie in (0, 1)");
  if (!(beta > 0 && beta <= 1))
    throw std::invalid_argument("beta must lie in (0, 1]");
}

double iteration_weight(int i, int h) {
  return static_cast<double>(h - i + 1) / static_cast<double>(h);
}

namespace {

std::vector<std::vector<int>> adjacency(const SemanticGraph &g) {
  std::vector<std::vector<int>> adj(g.size());
  for (const auto &e : g.edges) {
    adj[e.from].push_back(e.to);
    adj[e.to].push_back(e.from);
  }
  return adj;
}

/// One hop of taint spreading: a node is tainted when it or a neighbor was.
std::vector<bool> spread(const std::vector<std::vector<int>> &adj,
                         const std::vector<bool> &prev) {
  std::vector<bool> next(prev);
  for (std::size_t n = 0; n < adj.size(); ++n)
    for (int m : adj[n])
      next[n] = next[n] || prev[m];
  return next;
}

/// Nodes left over after pairing equal labels, tainted nodes preferred.
void unmatched_nodes(const std::vector<std::uint64_t> &mine,
                     const std::vector<std::uint64_t> &theirs,
                     const std::vector<bool> &taint, std::vector<int> &out) {
  std::map<std::uint64_t, long> other;
  for (auto l : theirs)
    ++other[l];
  std::map<std::uint64_t, std::vector<int>> by_label;
  for (std::size_t n = 0; n < mine.size(); ++n)
    by_label[mine[n]].push_back(static_cast<int>(n));
  for (auto &[label, ids] : by_label) {
    long excess = static_cast<long>(ids.size()) - other[label];
    if (excess <= 0)
      continue;
    std::stable_sort(ids.begin(), ids.end(),
                     [&](int a, int b) { return taint[a] && !taint[b]; });
    out.insert(out.end(), ids.begin(), ids.begin() + excess);
  }
  std::sort(out.begin(), out.end());
}

/// Unmatched nodes are paired across the graphs first (old with new) and the
/// surplus of the larger side in twos, tainted nodes first on every side. A
/// pair with a tainted member is damped; returns how many pairs are.
std::size_t damped_pairs(std::size_t n_old, std::size_t t_old, std::size_t n_new,
                         std::size_t t_new) {
  std::size_t cross = std::min(n_old, n_new);
  std::size_t damped = std::min(cross, std::max(t_old, t_new));
  std::size_t t_big = n_old >= n_new ? t_old : t_new;
  std::size_t t_left = t_big > cross ? t_big - cross : 0;
  return damped + (t_left + 1) / 2;
}

} // namespace

KernelResult kernel_distance(const SemanticGraph &g_old,
                             const SemanticGraph &g_new,
                             const KernelConfig &cfg) {
  cfg.validate();
  KernelResult r;
  const int h = cfg.h;
  if (g_old.size() == 0 || g_new.size() == 0) {
    r.k = (g_old.size() == 0 && g_new.size() == 0) ? 0.0 : 1.0;
    for (int i = 1; i <= h; ++i) {
      IterationStat st;
      st.i = i;
      st.weight = iteration_weight(i, h);
      st.unmatched = g_old.size() + g_new.size();
      st.mismatch = static_cast<double>(std::max(g_old.size(), g_new.size()));
      for (std::size_t n = 0; n < g_old.size(); ++n)
        st.unmatched_old.push_back(static_cast<int>(n));
      for (std::size_t n = 0; n < g_new.size(); ++n)
        st.unmatched_new.push_back(static_cast<int>(n));
      r.per_iteration.push_back(std::move(st));
    }
    r.is_semb = judge_value(r.k, cfg);
    return r;
  }

  auto la = wl_relabel(g_old, h);
  auto lb = wl_relabel(g_new, h);
  // Benign taint: iteration 1 marks the benign nodes and every later
  // iteration spreads it one hop, matching how far a label change travels.
  auto adj_a = adjacency(g_old);
  auto adj_b = adjacency(g_new);
  std::vector<std::vector<bool>> ta(h), tb(h);
  for (const auto &n : g_old.nodes)
    ta[0].push_back(n.benign);
  for (const auto &n : g_new.nodes)
    tb[0].push_back(n.benign);
  for (int i = 1; i < h; ++i) {
    ta[i] = spread(adj_a, ta[i - 1]);
    tb[i] = spread(adj_b, tb[i - 1]);
  }

  std::size_t benign = 0;
  for (const auto &n : g_new.nodes)
    benign += n.benign ? 1 : 0;
  const double p = static_cast<double>(benign) / g_new.size();

  double total = 0;
  for (int i = 1; i <= h; ++i) {
    IterationStat st;
    st.i = i;
    st.weight = iteration_weight(i, h);
    unmatched_nodes(la[i - 1], lb[i - 1], ta[i - 1], st.unmatched_old);
    unmatched_nodes(lb[i - 1], la[i - 1], tb[i - 1], st.unmatched_new);
    st.unmatched = st.unmatched_old.size() + st.unmatched_new.size();
    if (st.unmatched > 0) {
      double pairs = std::ceil(static_cast<double>(st.unmatched) / 2.0);
      if (cfg.penalty_mode == PenaltyMode::Global) {
        st.mismatch = pairs * p;
      } else {
        std::size_t to = 0, tn = 0;
        for (int n : st.unmatched_old)
          to += ta[i - 1][n] ? 1 : 0;
        for (int n : st.unmatched_new)
          tn += tb[i - 1][n] ? 1 : 0;
        double benign_pairs = static_cast<double>(
            damped_pairs(st.unmatched_old.size(), to, st.unmatched_new.size(), tn));
        st.mismatch = (pairs - benign_pairs) + cfg.beta * benign_pairs;
      }
    }
    total += st.mismatch * st.weight;
    r.per_iteration.push_back(std::move(st));
  }
  r.k = total / static_cast<double>(std::min(g_old.size(), g_new.size()));
  r.is_semb = judge_value(r.k, cfg);
  return r;
}

bool judge_value(double k, const KernelConfig &cfg) {
  return k > cfg.threshold;
}

bool judge_cluster(const KernelResult &r, const KernelConfig &cfg) {
  return judge_value(r.k, cfg);
}

} // namespace semverdiff
