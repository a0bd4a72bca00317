#include "zmlt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

#include "parallel.hpp"
#include "zmlt/geometry.hpp"

namespace zmlt {

namespace {

double mean_length(const Layout& layout, std::span<const NodePair> edges) {
  double sum = 0.0;
  for (const auto& e : edges) sum += distance(layout.at(e.u), layout.at(e.v));
  return sum / static_cast<double>(edges.size());
}

/// Hop distances between the placed nodes, row-major over `nodes`.
std::vector<int> hop_distances(const std::vector<NodeIndex>& nodes, std::span<const NodePair> edges,
                               std::size_t capacity) {
  constexpr std::uint32_t kAbsent = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> local(capacity, kAbsent);
  for (std::uint32_t i = 0; i < nodes.size(); ++i) local[nodes[i]] = i;
  const std::size_t n = nodes.size();
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (const auto& e : edges) {
    if (e.u >= capacity || e.v >= capacity || local[e.u] == kAbsent || local[e.v] == kAbsent)
      throw Error(ErrorCode::MissingPosition, "edge endpoint has no position");
    adj[local[e.u]].push_back(local[e.v]);
    adj[local[e.v]].push_back(local[e.u]);
  }
  std::vector<int> dist(n * n, -1);
  detail::parallel_for(n, [&](std::size_t s) {
    int* row = dist.data() + s * n;
    std::queue<std::uint32_t> queue;
    row[s] = 0;
    queue.push(static_cast<std::uint32_t>(s));
    while (!queue.empty()) {
      const auto v = queue.front();
      queue.pop();
      for (auto w : adj[v])
        if (row[w] < 0) {
          row[w] = row[v] + 1;
          queue.push(w);
        }
    }
  });
  if (std::find(dist.begin(), dist.end(), -1) != dist.end())
    throw Error(ErrorCode::Disconnected, "edges do not connect the placed nodes");
  return dist;
}

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<double> optional_from(const nlohmann::json& v) {
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

}  // namespace

std::vector<std::optional<double>> metric_dl(std::span<const Layout> layouts, const WeightedGraph& g,
                                             const LevelHierarchy& h) {
  const int n = h.levels();
  if (layouts.size() != static_cast<std::size_t>(n))
    throw Error(ErrorCode::WrongLength, "one layout per level is required");
  std::vector<std::optional<double>> means(n);
  for (int i = 0; i < n; ++i) {
    const auto& now = h.trees[i];
    std::vector<NodePair> fresh;
    for (EdgeIndex e : now)
      if (i == 0 || !std::binary_search(h.trees[i - 1].begin(), h.trees[i - 1].end(), e))
        fresh.push_back(g.edge(e).ends);
    if (!fresh.empty()) means[i] = mean_length(layouts[i], fresh);
  }
  std::optional<double> reference;
  for (const auto& m : means)
    if (m) {
      reference = m;
      break;
    }
  std::vector<std::optional<double>> out(n);
  if (!reference || *reference <= 0.0) return out;
  for (int i = 0; i < n; ++i)
    if (means[i]) out[i] = *means[i] / *reference;
  return out;
}

double metric_stress(const Layout& layout, std::span<const NodePair> edges) {
  const auto nodes = layout.nodes();
  const std::size_t n = nodes.size();
  if (n < 2) return 0.0;
  const auto hops = hop_distances(nodes, edges, layout.capacity());

  // With w = d^-2 the optimal scale is sum(D/d) / sum(D^2/d^2).
  std::vector<double> num(n, 0.0), den(n, 0.0);
  detail::parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = hops[i * n + j];
      const double drawn = distance(layout[nodes[i]], layout[nodes[j]]);
      num[i] += drawn / d;
      den[i] += drawn * drawn / (d * d);
    }
  });
  const double sum_num = std::accumulate(num.begin(), num.end(), 0.0);
  const double sum_den = std::accumulate(den.begin(), den.end(), 0.0);
  const double alpha = sum_den > 0.0 ? sum_num / sum_den : 0.0;

  std::vector<double> part(n, 0.0);
  detail::parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = hops[i * n + j];
      const double r = alpha * distance(layout[nodes[i]], layout[nodes[j]]) - d;
      part[i] += r * r / (d * d);
    }
  });
  return std::accumulate(part.begin(), part.end(), 0.0);
}

double metric_cm(const Layout& layout, std::span<const LabelBox> boxes) {
  const Bounds b = label_bounds(layout, boxes);
  double labels = 0.0;
  for (NodeIndex v : layout.nodes()) labels += boxes[v].area();
  if (!(labels > 0.0)) throw Error(ErrorCode::DegenerateLayout, "labels have zero total area");
  return b.width() * b.height() / labels;
}

double metric_eu(const Layout& layout, std::span<const NodePair> edges) {
  if (edges.empty()) throw Error(ErrorCode::EmptyLevel, "edge uniformity needs at least one edge");
  const double mean = mean_length(layout, edges);
  double var = 0.0;
  for (const auto& e : edges) {
    const double r = distance(layout.at(e.u), layout.at(e.v)) - mean;
    var += r * r;
  }
  var /= static_cast<double>(edges.size());
  if (!(mean > 0.0)) throw Error(ErrorCode::DegenerateLayout, "edges have zero mean length");
  return std::sqrt(var) / mean;
}

BoxSize metric_bb(const Layout& layout, std::span<const LabelBox> boxes) {
  const Bounds b = label_bounds(layout, boxes);
  return {b.width(), b.height()};
}

MetricsReport report(std::span<const Layout> layouts, const WeightedGraph& g, const LevelHierarchy& h,
                     std::span<const LabelBox> boxes) {
  if (boxes.size() != g.node_count()) throw Error(ErrorCode::WrongLength, "one label box per node is required");
  const auto dl = metric_dl(layouts, g, h);
  MetricsReport out;
  for (int i = 0; i < h.levels(); ++i) {
    const Layout& layout = layouts[i];
    const auto edges = h.tree_pairs(g, i + 1);
    for (NodeIndex v : h.tree_nodes[i]) (void)layout.at(v);
    LevelMetrics row;
    row.level = i + 1;
    row.nodes = layout.size();
    row.edges = edges.size();
    row.dl = dl[i];
    row.stress = metric_stress(layout, edges);
    row.cm = metric_cm(layout, boxes);
    if (!edges.empty()) row.eu = metric_eu(layout, edges);
    row.bb = metric_bb(layout, boxes);
    row.crossings = count_crossings(layout, edges);
    row.overlaps = rect_overlap_count(layout, boxes);
    out.levels.push_back(row);
  }
  return out;
}

std::string render_table(const MetricsReport& report) {
  auto fmt = [](const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return std::string(buf);
  };
  auto opt = [&](const std::optional<double>& v) { return v ? fmt("%.4f", *v) : std::string("-"); };

  const std::vector<std::string> head{"level", "nodes", "edges", "DL", "ST", "CM", "EU", "BB", "crossings",
                                      "overlaps"};
  std::vector<std::vector<std::string>> rows{head};
  for (const auto& r : report.levels)
    rows.push_back({std::to_string(r.level), std::to_string(r.nodes), std::to_string(r.edges), opt(r.dl),
                    fmt("%.4f", r.stress), fmt("%.2f", r.cm), opt(r.eu),
                    fmt("%.1f", r.bb.width) + " x " + fmt("%.1f", r.bb.height), std::to_string(r.crossings),
                    std::to_string(r.overlaps)});
  std::vector<std::size_t> width(head.size(), 0);
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out += "  ";
      out += std::string(width[c] - row[c].size(), ' ') + row[c];
    }
    out += '\n';
  }
  return out;
}

nlohmann::json to_json(const MetricsReport& report) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& r : report.levels)
    levels.push_back({{"level", r.level},
                      {"nodes", r.nodes},
                      {"edges", r.edges},
                      {"DL", optional_json(r.dl)},
                      {"ST", r.stress},
                      {"CM", r.cm},
                      {"EU", optional_json(r.eu)},
                      {"BB", {r.bb.width, r.bb.height}},
                      {"crossings", r.crossings},
                      {"overlaps", r.overlaps}});
  return {{"metadata", report.metadata}, {"levels", levels}};
}

MetricsReport metrics_from_json(const nlohmann::json& doc) {
  try {
    MetricsReport out;
    out.metadata = doc.value("metadata", nlohmann::json::object());
    for (const auto& r : doc.at("levels")) {
      LevelMetrics row;
      row.level = r.at("level").get<int>();
      row.nodes = r.at("nodes").get<std::size_t>();
      row.edges = r.at("edges").get<std::size_t>();
      row.dl = optional_from(r.at("DL"));
      row.stress = r.at("ST").get<double>();
      row.cm = r.at("CM").get<double>();
      row.eu = optional_from(r.at("EU"));
      row.bb = {r.at("BB").at(0).get<double>(), r.at("BB").at(1).get<double>()};
      row.crossings = r.at("crossings").get<std::size_t>();
      row.overlaps = r.at("overlaps").get<std::size_t>();
      out.levels.push_back(row);
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("metrics document: ") + e.what());
  }
}

}  // namespace zmlt
