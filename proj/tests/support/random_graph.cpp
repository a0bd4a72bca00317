#include "random_graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace zmlt::testing {

std::string random_word(std::mt19937_64& rng, int min_len, int max_len) {
  static constexpr char kConsonants[] = "bcdfghklmnprstvz";
  static constexpr char kVowels[] = "aeiou";
  std::uniform_int_distribution<int> len(min_len, max_len);
  std::uniform_int_distribution<int> c(0, 15), v(0, 4);
  const int n = len(rng);
  std::string out;
  for (int i = 0; i < n; ++i) out += (i % 2 == 0) ? kConsonants[c(rng)] : kVowels[v(rng)];
  out[0] = static_cast<char>(out[0] - 'a' + 'A');
  return out;
}

namespace {

std::vector<NodeRecord> random_nodes(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<NodeRecord> nodes;
  for (int i = 0; i < n; ++i) {
    // Pareto-like tail squeezed into (0, 1].
    const double w = std::pow(1.0 - unit(rng), 3.0) * 0.999 + 0.001;
    nodes.push_back({"v" + std::to_string(i), random_word(rng, 3, 12), w});
  }
  return nodes;
}

WeightedGraph finish(std::mt19937_64& rng, std::vector<NodeRecord> nodes, const std::set<std::pair<int, int>>& pairs) {
  std::uniform_real_distribution<double> weight(0.05, 1.0);
  std::vector<EdgeRecord> edges;
  for (const auto& [a, b] : pairs) edges.push_back({nodes[a].id, nodes[b].id, weight(rng)});
  return WeightedGraph(std::move(nodes), edges);
}

}  // namespace

WeightedGraph preferential_graph(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  auto nodes = random_nodes(rng, n);
  std::set<std::pair<int, int>> pairs;
  std::vector<int> degree(n, 0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int v = 1; v < n; ++v) {
    const int links = (v >= 2 && unit(rng) < 0.5) ? 2 : 1;
    std::set<int> chosen;
    while (static_cast<int>(chosen.size()) < links) {
      double total = 0.0;
      for (int u = 0; u < v; ++u) total += degree[u] + 1.0;
      double r = unit(rng) * total;
      int pick = v - 1;
      for (int u = 0; u < v; ++u) {
        r -= degree[u] + 1.0;
        if (r < 0.0) {
          pick = u;
          break;
        }
      }
      chosen.insert(pick);
    }
    for (int u : chosen) {
      pairs.insert({u, v});
      ++degree[u];
      ++degree[v];
    }
  }
  return finish(rng, std::move(nodes), pairs);
}

WeightedGraph recursive_tree_graph(std::uint64_t seed, int n, int extra) {
  std::mt19937_64 rng(seed);
  auto nodes = random_nodes(rng, n);
  std::set<std::pair<int, int>> pairs;
  for (int v = 1; v < n; ++v) pairs.insert({std::uniform_int_distribution<int>(0, v - 1)(rng), v});
  std::uniform_int_distribution<int> any(0, n - 1);
  for (int k = 0; k < extra && n > 2;) {
    int a = any(rng), b = any(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (pairs.insert({a, b}).second) ++k;
  }
  return finish(rng, std::move(nodes), pairs);
}

std::vector<int> random_tree_parents(std::mt19937_64& rng, int n) {
  std::vector<int> parent(n, -1);
  for (int v = 1; v < n; ++v) parent[v] = std::uniform_int_distribution<int>(0, v - 1)(rng);
  return parent;
}

WeightedGraph graph_from_pairs(int n, const std::vector<std::pair<int, int>>& edges,
                               const std::vector<double>& node_weights) {
  std::vector<NodeRecord> nodes;
  for (int i = 0; i < n; ++i)
    nodes.push_back({std::to_string(i), "n" + std::to_string(i),
                     node_weights.empty() ? 1.0 : node_weights[static_cast<std::size_t>(i)]});
  std::vector<EdgeRecord> records;
  for (const auto& [a, b] : edges) records.push_back({std::to_string(a), std::to_string(b), 1.0});
  return WeightedGraph(std::move(nodes), records);
}

Layout random_layout(std::mt19937_64& rng, std::size_t n, double side) {
  std::uniform_real_distribution<double> coord(0.0, side);
  Layout layout(n);
  for (NodeIndex v = 0; v < n; ++v) layout.set(v, {coord(rng), coord(rng)});
  return layout;
}

}  // namespace zmlt::testing
