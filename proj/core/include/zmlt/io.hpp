#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "zmlt/force_layout.hpp"
#include "zmlt/graph.hpp"
#include "zmlt/layout.hpp"
#include "zmlt/steiner.hpp"

namespace zmlt {

enum class GraphFormat { Simple, Dot };

GraphFormat parse_graph_format(std::string_view name);

/// Line format: `node <id> <label> <weight>` and `edge <u> <v> <weight>`.
/// Tokens are whitespace separated; double quotes allow spaces, with \" and
/// \\ as escapes. A '#' at the start of a token begins a comment.
WeightedGraph read_graph_simple(std::istream& in);

/// DOT subset: node statements with `label` and `weight` attributes, edge
/// statements (chains allowed) with `weight`. Nodes mentioned only by edges
/// get weight 1 and their id as label. Attribute defaults are ignored.
WeightedGraph read_graph_dot(std::istream& in);

/// Reads and parses a graph file; IoError names the path when it cannot be opened.
WeightedGraph read_graph_file(const std::filesystem::path& path, GraphFormat format);

void write_graph_simple(std::ostream& out, const WeightedGraph& g);

/// Quotes a token for the simple format when needed.
std::string quote_token(std::string_view token);

/// {levels, percentages, level_of: {id: level}, trees: [[[u, v], ...]], steiner: [[id, ...]]}
nlohmann::json hierarchy_to_json(const WeightedGraph& g, const LevelHierarchy& h);

/// Rebuilds and checks a hierarchy against its graph.
LevelHierarchy hierarchy_from_json(const WeightedGraph& g, const nlohmann::json& doc);

/// {positions: {id: [x, y]}, crossings, overlaps}
nlohmann::json layout_to_json(const WeightedGraph& g, const Layout& layout, std::size_t crossings,
                              std::size_t overlaps);

Layout layout_from_json(const WeightedGraph& g, const nlohmann::json& doc);

nlohmann::json read_json_file(const std::filesystem::path& path);

/// Writes `doc` with two-space indentation and a trailing newline.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);

/// Everything a run needs besides the graph.
struct RunConfig {
  std::vector<double> levels{5, 15, 30, 40, 60, 70, 85, 100};
  std::vector<double> fonts{30, 25, 20, 15, 12, 10, 9, 8};
  ForceConfig force;
  LabelMetrics labels;
  std::string font_name = "sans-serif";
  std::size_t clusters = 0;
  /// Unless set explicitly, L0 becomes the mean level-1 label width and delta
  /// becomes L0 once label sizes are known.
  bool fit_L0 = true;
  bool fit_delta = true;
};

/// Resolves fitted force parameters from the label widths of T_1.
void fit_force_to_labels(RunConfig& cfg, double mean_label_width);

/// Flat `key = value` text; lists are comma separated, '#' starts a comment.
/// Keys: levels, fonts, seed, iterations, delta, L0, gamma, gamma_e,
/// safety_divisor, repulsion, cooling, char_width, line_height, font_name,
/// clusters. Unknown keys throw BadConfig.
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig read_config_file(const std::filesystem::path& path, RunConfig base = {});

/// Applies one key; shared by the file parser and command-line overrides.
void apply_config_value(RunConfig& cfg, std::string_view key, std::string_view value);

std::vector<double> parse_number_list(std::string_view text);

/// Effective configuration, echoed into metrics metadata.
nlohmann::json config_to_json(const RunConfig& cfg);

}  // namespace zmlt
