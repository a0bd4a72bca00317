#include "zmlt/steiner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <string>
#include <tuple>

namespace zmlt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0u); }
  NodeIndex find(NodeIndex x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(NodeIndex a, NodeIndex b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<NodeIndex> parent_;
};

// Shortest-path state grown incrementally from the current tree.
class PathSearch {
 public:
  PathSearch(const WeightedGraph& g, const SteinerCostView& costs, const std::vector<char>& in_tree)
      : g_(g), costs_(costs), in_tree_(in_tree), dist_(g.node_count(), kInf),
        pred_(g.node_count(), kNoNode), pred_edge_(g.node_count(), 0) {
    for (NodeIndex v = 0; v < g.node_count(); ++v)
      if (in_tree_[v]) add_source(v);
    run();
  }

  void add_source(NodeIndex v) {
    dist_[v] = 0.0;
    pred_[v] = kNoNode;
    heap_.push({0.0, g_.id_rank()[v], v});
  }

  void run() {
    const auto rank = g_.id_rank();
    while (!heap_.empty()) {
      const auto [d, r, y] = heap_.top();
      heap_.pop();
      if (d > dist_[y]) continue;
      for (const auto& inc : g_.neighbors(y)) {
        const NodeIndex x = inc.neighbor;
        const double step = costs_.edge_cost(inc.edge) + (in_tree_[x] ? 0.0 : costs_.node_cost(x));
        const double nd = d + step;
        if (nd < dist_[x]) {
          dist_[x] = nd;
          pred_[x] = y;
          pred_edge_[x] = inc.edge;
          heap_.push({nd, rank[x], x});
        } else if (nd == dist_[x] && pred_[x] != kNoNode && rank[y] < rank[pred_[x]]) {
          pred_[x] = y;
          pred_edge_[x] = inc.edge;
        }
      }
    }
  }

  double dist(NodeIndex v) const { return dist_[v]; }
  NodeIndex pred(NodeIndex v) const { return pred_[v]; }
  EdgeIndex pred_edge(NodeIndex v) const { return pred_edge_[v]; }

 private:
  using Entry = std::tuple<double, std::uint32_t, NodeIndex>;

  const WeightedGraph& g_;
  const SteinerCostView& costs_;
  const std::vector<char>& in_tree_;
  std::vector<double> dist_;
  std::vector<NodeIndex> pred_;
  std::vector<EdgeIndex> pred_edge_;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap_;
};

// Minimum spanning tree of the graph induced by `in_tree` that contains
// `forced`; non-terminal leaves outside `keep` are pruned afterwards.
std::vector<EdgeIndex> refine_level(const WeightedGraph& g, const SteinerCostView& costs,
                                    std::vector<char>& in_tree, std::span<const EdgeIndex> forced,
                                    const std::vector<char>& keep) {
  std::vector<EdgeIndex> candidates;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    const auto& ends = g.edge(e).ends;
    if (in_tree[ends.u] && in_tree[ends.v]) candidates.push_back(e);
  }
  std::stable_sort(candidates.begin(), candidates.end(), [&](EdgeIndex a, EdgeIndex b) {
    return costs.edge_cost(a) < costs.edge_cost(b);
  });

  DisjointSets sets(g.node_count());
  std::vector<EdgeIndex> chosen;
  for (EdgeIndex e : forced) {
    sets.unite(g.edge(e).ends.u, g.edge(e).ends.v);
    chosen.push_back(e);
  }
  for (EdgeIndex e : candidates)
    if (sets.unite(g.edge(e).ends.u, g.edge(e).ends.v)) chosen.push_back(e);

  std::vector<int> degree(g.node_count(), 0);
  for (EdgeIndex e : chosen) {
    ++degree[g.edge(e).ends.u];
    ++degree[g.edge(e).ends.v];
  }
  std::vector<char> alive(g.edge_count(), 0);
  for (EdgeIndex e : chosen) alive[e] = 1;

  std::vector<NodeIndex> leaves;
  for (NodeIndex v = 0; v < g.node_count(); ++v)
    if (in_tree[v] && !keep[v] && degree[v] <= 1) leaves.push_back(v);
  while (!leaves.empty()) {
    const NodeIndex v = leaves.back();
    leaves.pop_back();
    if (!in_tree[v] || keep[v] || degree[v] > 1) continue;
    in_tree[v] = 0;
    for (const auto& inc : g.neighbors(v)) {
      if (!alive[inc.edge]) continue;
      alive[inc.edge] = 0;
      --degree[v];
      if (--degree[inc.neighbor] <= 1 && !keep[inc.neighbor]) leaves.push_back(inc.neighbor);
    }
  }
  std::vector<EdgeIndex> out;
  for (EdgeIndex e : chosen)
    if (alive[e]) out.push_back(e);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

SteinerCostView::SteinerCostView(const WeightedGraph& g) {
  auto reciprocal = [](double w) { return std::min(kCostCap, 1.0 / w); };
  edge_cost_.reserve(g.edge_count());
  for (const auto& e : g.edges()) edge_cost_.push_back(reciprocal(e.weight));
  node_cost_.reserve(g.node_count());
  for (const auto& n : g.nodes()) node_cost_.push_back(reciprocal(n.weight));
}

NodeFiltration build_filtration(const WeightedGraph& g, std::span<const double> percentages) {
  if (percentages.empty()) throw Error(ErrorCode::BadPercentages, "no levels given");
  const double scale = percentages.back() > 1.0 + 1e-9 ? 0.01 : 1.0;
  std::vector<double> p;
  for (double x : percentages) p.push_back(x * scale);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0) || p[i] > 1.0 + 1e-12)
      throw Error(ErrorCode::BadPercentages, "level percentage out of (0, 1]");
    if (i > 0 && !(p[i] > p[i - 1]))
      throw Error(ErrorCode::BadPercentages, "level percentages must be strictly increasing");
  }
  if (std::abs(p.back() - 1.0) > 1e-9)
    throw Error(ErrorCode::BadPercentages, "last level must contain every node");
  p.back() = 1.0;

  const std::size_t n = g.node_count();
  const std::size_t levels = p.size();
  if (n < levels)
    throw Error(ErrorCode::BadPercentages, std::to_string(levels) + " levels need at least " +
                                               std::to_string(levels) + " nodes");

  NodeFiltration f;
  f.levels = static_cast<int>(levels);
  f.percentages = p;
  f.counts.resize(levels);
  std::size_t prev = 0;
  for (std::size_t i = 0; i < levels; ++i) {
    auto c = static_cast<std::size_t>(std::llround(p[i] * static_cast<double>(n)));
    c = std::max(c, prev + 1);            // at least one new node per level
    c = std::min(c, n - (levels - 1 - i));  // leave room for the levels below
    f.counts[i] = c;
    prev = c;
  }

  const auto order = g.importance_order();
  f.level_of.assign(n, 0);
  std::size_t level = 0;
  for (std::size_t k = 0; k < n; ++k) {
    while (k >= f.counts[level]) ++level;
    f.level_of[order[k]] = static_cast<int>(level + 1);
  }
  return f;
}

std::vector<int> LevelHierarchy::node_entry_level() const {
  std::vector<int> out(filtration.level_of.size(), 0);
  for (int i = levels(); i >= 1; --i)
    for (NodeIndex v : tree_nodes[static_cast<std::size_t>(i - 1)]) out[v] = i;
  return out;
}

std::vector<int> LevelHierarchy::edge_entry_level(std::size_t edge_count) const {
  std::vector<int> out(edge_count, 0);
  for (int i = levels(); i >= 1; --i)
    for (EdgeIndex e : trees[static_cast<std::size_t>(i - 1)]) out[e] = i;
  return out;
}

std::vector<NodePair> LevelHierarchy::tree_pairs(const WeightedGraph& g, int level) const {
  if (level < 1 || level > levels())
    throw Error(ErrorCode::InvalidLevel, "level " + std::to_string(level) + " out of range");
  std::vector<NodePair> out;
  for (EdgeIndex e : trees[static_cast<std::size_t>(level - 1)]) out.push_back(g.edge(e).ends);
  return out;
}

LevelHierarchy make_hierarchy(const WeightedGraph& g, NodeFiltration filtration,
                              std::vector<std::vector<EdgeIndex>> trees) {
  if (trees.size() != static_cast<std::size_t>(filtration.levels))
    throw Error(ErrorCode::WrongLength, "hierarchy needs one tree per level");
  LevelHierarchy h;
  h.filtration = std::move(filtration);
  h.trees = std::move(trees);
  const auto order = g.importance_order();
  for (int i = 1; i <= h.levels(); ++i) {
    auto& edges = h.trees[static_cast<std::size_t>(i - 1)];
    std::sort(edges.begin(), edges.end());
    std::vector<NodeIndex> nodes;
    for (EdgeIndex e : edges) {
      if (e >= g.edge_count()) throw Error(ErrorCode::UnknownNode, "tree references unknown edge");
      nodes.push_back(g.edge(e).ends.u);
      nodes.push_back(g.edge(e).ends.v);
    }
    if (nodes.empty()) nodes.push_back(order.front());
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    std::vector<NodeIndex> steiner;
    for (NodeIndex v : nodes)
      if (!h.filtration.contains(i, v)) steiner.push_back(v);
    h.tree_nodes.push_back(std::move(nodes));
    h.steiner.push_back(std::move(steiner));
  }
  return h;
}

std::optional<Error> check_hierarchy(const WeightedGraph& g, const LevelHierarchy& h) {
  const int n = h.levels();
  if (n < 1 || h.trees.size() != static_cast<std::size_t>(n) ||
      h.tree_nodes.size() != static_cast<std::size_t>(n))
    return Error(ErrorCode::InvalidLevel, "hierarchy level count mismatch");
  for (int i = 1; i <= n; ++i) {
    const auto& edges = h.trees[static_cast<std::size_t>(i - 1)];
    const auto& nodes = h.tree_nodes[static_cast<std::size_t>(i - 1)];
    const std::string tag = "T_" + std::to_string(i);
    for (EdgeIndex e : edges)
      if (e >= g.edge_count()) return Error(ErrorCode::InvariantViolation, tag + " uses a non-graph edge");
    if (edges.size() + 1 != nodes.size())
      return Error(ErrorCode::NotATree, tag + " edge count is not node count - 1");
    DisjointSets sets(g.node_count());
    for (EdgeIndex e : edges) {
      const auto& ends = g.edge(e).ends;
      if (!std::binary_search(nodes.begin(), nodes.end(), ends.u) ||
          !std::binary_search(nodes.begin(), nodes.end(), ends.v))
        return Error(ErrorCode::InvariantViolation, tag + " edge endpoint missing from node set");
      if (!sets.unite(ends.u, ends.v)) return Error(ErrorCode::NotATree, tag + " contains a cycle");
    }
    for (NodeIndex v = 0; v < g.node_count(); ++v)
      if (h.filtration.contains(i, v) && !std::binary_search(nodes.begin(), nodes.end(), v))
        return Error(ErrorCode::InvariantViolation, tag + " misses terminal '" + g.id(v) + "'");
    if (i > 1) {
      const auto& prev_edges = h.trees[static_cast<std::size_t>(i - 2)];
      const auto& prev_nodes = h.tree_nodes[static_cast<std::size_t>(i - 2)];
      if (!std::includes(edges.begin(), edges.end(), prev_edges.begin(), prev_edges.end()))
        return Error(ErrorCode::InvariantViolation, tag + " does not contain the edges of the previous level");
      if (!std::includes(nodes.begin(), nodes.end(), prev_nodes.begin(), prev_nodes.end()))
        return Error(ErrorCode::InvariantViolation, tag + " does not contain the nodes of the previous level");
    }
  }
  if (h.tree_nodes.back().size() != g.node_count())
    return Error(ErrorCode::InvariantViolation, "last tree does not span the graph");
  return std::nullopt;
}

LevelHierarchy extract_hierarchy(const WeightedGraph& g, const NodeFiltration& filtration) {
  const SteinerCostView costs(g);
  const auto order = g.importance_order();
  const auto rank = g.id_rank();

  std::vector<char> in_tree(g.node_count(), 0);
  in_tree[order.front()] = 1;
  std::vector<std::vector<EdgeIndex>> trees;
  std::vector<EdgeIndex> current;

  for (int level = 1; level <= filtration.levels; ++level) {
    std::vector<NodeIndex> pending;
    for (NodeIndex v : order)
      if (filtration.contains(level, v) && !in_tree[v]) pending.push_back(v);

    if (!pending.empty()) {
      const std::vector<char> prev_nodes = in_tree;
      PathSearch search(g, costs, in_tree);
      while (!pending.empty()) {
        auto best = pending.begin();
        for (auto it = pending.begin(); it != pending.end(); ++it) {
          const double d = search.dist(*it), bd = search.dist(*best);
          if (d < bd || (d == bd && rank[*it] < rank[*best])) best = it;
        }
        if (!std::isfinite(search.dist(*best)))
          throw Error(ErrorCode::DisconnectedGraph, "terminal '" + g.id(*best) + "' is unreachable");
        for (NodeIndex v = *best; !in_tree[v];) {
          const NodeIndex next = search.pred(v);
          in_tree[v] = 1;
          search.add_source(v);
          v = next;
        }
        search.run();
        pending.erase(std::remove_if(pending.begin(), pending.end(),
                                     [&](NodeIndex v) { return in_tree[v] != 0; }),
                      pending.end());
      }

      std::vector<char> keep = prev_nodes;
      for (NodeIndex v = 0; v < g.node_count(); ++v)
        if (filtration.contains(level, v)) keep[v] = 1;
      current = refine_level(g, costs, in_tree, current, keep);
    }
    trees.push_back(current);
  }
  return make_hierarchy(g, filtration, std::move(trees));
}

double tree_cost(const SteinerCostView& costs, std::span<const EdgeIndex> edges,
                 std::span<const NodeIndex> nodes) {
  double total = 0.0;
  for (EdgeIndex e : edges) total += costs.edge_cost(e);
  for (NodeIndex v : nodes) total += costs.node_cost(v);
  return total;
}

double hierarchy_cost(const WeightedGraph& g, const LevelHierarchy& h) {
  const SteinerCostView costs(g);
  double total = 0.0;
  for (int i = 0; i < h.levels(); ++i)
    total += tree_cost(costs, h.trees[static_cast<std::size_t>(i)],
                       h.tree_nodes[static_cast<std::size_t>(i)]);
  return total;
}

std::vector<RootedSubtree> level_forest(const WeightedGraph& g, const LevelHierarchy& h, int level) {
  if (level < 1 || level >= h.levels())
    throw Error(ErrorCode::InvalidLevel, "forest level " + std::to_string(level) + " must be in [1, " +
                                             std::to_string(h.levels() - 1) + "]");
  const auto& old_edges = h.trees[static_cast<std::size_t>(level - 1)];
  const auto& new_edges = h.trees[static_cast<std::size_t>(level)];
  const auto& old_nodes = h.tree_nodes[static_cast<std::size_t>(level - 1)];
  const auto rank = g.id_rank();

  std::vector<EdgeIndex> added;
  std::set_difference(new_edges.begin(), new_edges.end(), old_edges.begin(), old_edges.end(),
                      std::back_inserter(added));

  std::vector<std::vector<NodeIndex>> adj(g.node_count());
  for (EdgeIndex e : added) {
    const auto& ends = g.edge(e).ends;
    adj[ends.u].push_back(ends.v);
    adj[ends.v].push_back(ends.u);
  }
  for (auto& list : adj)
    std::sort(list.begin(), list.end(), [&](NodeIndex a, NodeIndex b) { return rank[a] < rank[b]; });

  auto in_old = [&](NodeIndex v) { return std::binary_search(old_nodes.begin(), old_nodes.end(), v); };

  std::vector<NodeIndex> roots(old_nodes.begin(), old_nodes.end());
  std::sort(roots.begin(), roots.end(), [&](NodeIndex a, NodeIndex b) { return rank[a] < rank[b]; });

  std::vector<RootedSubtree> forest;
  std::size_t covered = 0;
  for (NodeIndex root : roots) {
    for (NodeIndex child : adj[root]) {
      if (in_old(child))
        throw Error(ErrorCode::BadForest, "new edge joins two nodes of the previous tree");
      RootedSubtree sub;
      sub.root = root;
      sub.nodes.push_back(root);
      // Iterative preorder DFS below the root.
      std::vector<std::pair<NodeIndex, NodeIndex>> stack{{child, root}};
      while (!stack.empty()) {
        const auto [v, parent] = stack.back();
        stack.pop_back();
        sub.nodes.push_back(v);
        sub.edges.push_back({parent, v});
        for (auto it = adj[v].rbegin(); it != adj[v].rend(); ++it) {
          if (*it == parent) continue;
          if (in_old(*it))
            throw Error(ErrorCode::BadForest, "forest component attaches to the previous tree twice");
          stack.push_back({*it, v});
        }
      }
      covered += sub.edges.size();
      forest.push_back(std::move(sub));
    }
  }
  if (covered != added.size())
    throw Error(ErrorCode::BadForest, "forest component does not attach to the previous tree");
  return forest;
}

}  // namespace zmlt
