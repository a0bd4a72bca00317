#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "zmlt/geojson.hpp"
#include "zmlt/geometry.hpp"
#include "zmlt/io.hpp"
#include "zmlt/metrics.hpp"
#include "zmlt/pipeline.hpp"

namespace zmlt::cli {

namespace fs = std::filesystem;

namespace {

/// An error tagged with the pipeline stage that raised it.
struct StageError {
  std::string stage;
  std::string code;
  std::string message;
};

template <class F>
auto stage(const char* name, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    throw StageError{name, std::string(to_string(e.code())), e.what()};
  } catch (const nlohmann::json::exception& e) {
    throw StageError{name, "ParseError", e.what()};
  } catch (const std::filesystem::filesystem_error& e) {
    throw StageError{name, "IoError", e.what()};
  }
}

struct Options {
  std::string input;
  std::string config;
  std::string out = ".";
  std::string levels;
  std::string fonts;
  std::optional<std::uint64_t> seed;
  std::string format = "simple";
  bool baseline = false;
  std::string hierarchy;
  std::vector<std::string> layouts;
};

void add_common(CLI::App& cmd, Options& o) {
  cmd.add_option("--input", o.input, "Graph file")->required();
  cmd.add_option("--format", o.format, "Graph file format")->check(CLI::IsMember({"simple", "dot"}));
  cmd.add_option("--config", o.config, "Configuration file (key = value lines)");
  cmd.add_option("--levels", o.levels, "Cumulative level percentages, comma separated");
  cmd.add_option("--fonts", o.fonts, "Font size per level, comma separated");
  cmd.add_option("--seed", o.seed, "Seed for tie-breaking directions");
}

RunConfig load_config(const Options& o) {
  return stage("config", [&] {
    RunConfig cfg;
    if (!o.config.empty()) cfg = read_config_file(o.config, cfg);
    const RunConfig defaults;
    const bool fonts_default = o.fonts.empty() && cfg.fonts == defaults.fonts;
    if (!o.levels.empty()) apply_config_value(cfg, "levels", o.levels);
    if (!o.fonts.empty()) apply_config_value(cfg, "fonts", o.fonts);
    if (o.seed) cfg.force.rng_seed = *o.seed;
    // Fewer levels than the default font ladder: use its first entries.
    if (fonts_default && cfg.levels.size() < cfg.fonts.size()) cfg.fonts.resize(cfg.levels.size());
    cfg.force.validate();
    return cfg;
  });
}

WeightedGraph load_graph(const Options& o) {
  return stage("input", [&] {
    auto g = read_graph_file(o.input, parse_graph_format(o.format));
    require_valid(g);
    return g;
  });
}

LevelHierarchy load_hierarchy(const WeightedGraph& g, const Options& o) {
  return stage("hierarchy", [&] { return hierarchy_from_json(g, read_json_file(o.hierarchy)); });
}

std::vector<LabelBox> label_boxes(const WeightedGraph& g, const LevelHierarchy& h, RunConfig& cfg) {
  return stage("config", [&] {
    if (cfg.fonts.size() > static_cast<std::size_t>(h.levels()) && cfg.levels.size() != cfg.fonts.size())
      cfg.fonts.resize(static_cast<std::size_t>(h.levels()));
    auto boxes = assign_font_sizes(g, h.filtration, cfg.fonts, cfg.labels);
    fit_force_to_labels(cfg, mean_first_level_label_width(h, boxes));
    return boxes;
  });
}

fs::path output_dir(const Options& o) {
  return stage("output", [&] {
    fs::path dir(o.out);
    fs::create_directories(dir);
    return dir;
  });
}

void write_layout(const fs::path& path, const WeightedGraph& g, const Layout& layout,
                  std::span<const NodePair> edges, std::span<const LabelBox> boxes) {
  write_json_file(path, layout_to_json(g, layout, count_crossings(layout, edges), rect_overlap_count(layout, boxes)));
}

MetricsReport make_report(std::span<const Layout> levels, const WeightedGraph& g, const LevelHierarchy& h,
                          std::span<const LabelBox> boxes, const RunConfig& cfg, const char* method) {
  return stage("metrics", [&] {
    MetricsReport r = report(levels, g, h, boxes);
    r.metadata = config_to_json(cfg);
    r.metadata["method"] = method;
    r.metadata["nodes"] = g.node_count();
    r.metadata["edges"] = g.edge_count();
    return r;
  });
}

Layout compute_layout(const WeightedGraph& g, const LevelHierarchy& h, std::span<const LabelBox> boxes,
                      const RunConfig& cfg, const fs::path& dir) {
  return stage("layout", [&] {
    return run_pipeline(g, h, boxes, cfg.force, [&](int level, const Layout& layout) {
      write_layout(dir / ("stage_" + std::to_string(level) + ".layout.json"), g, layout, h.tree_pairs(g, level),
                   boxes);
    });
  });
}

Layout compute_baseline(const WeightedGraph& g, const LevelHierarchy& h, std::span<const LabelBox> boxes,
                        const RunConfig& cfg, const fs::path& dir) {
  return stage("baseline", [&] {
    Layout layout = baseline_scale_layout(g, h, boxes, cfg.force);
    write_layout(dir / "baseline.layout.json", g, layout, h.tree_pairs(g, h.levels()), boxes);
    return layout;
  });
}

void emit_metrics(std::ostream& out, const fs::path& path, const MetricsReport& r, const char* title) {
  stage("metrics", [&] {
    write_json_file(path, to_json(r));
    out << title << '\n' << render_table(r);
    return 0;
  });
}

void export_layers(const fs::path& dir, const Layout& final_layout, const LevelHierarchy& h,
                   std::span<const LabelBox> boxes, const WeightedGraph& g, const RunConfig& cfg) {
  stage("export", [&] {
    const auto layers = to_geojson(final_layout, h, boxes, g, {cfg.font_name, cfg.clusters});
    write_json_file(dir / "nodes.geojson", layers.nodes);
    write_json_file(dir / "edges.geojson", layers.edges);
    write_json_file(dir / "clusters.geojson", layers.clusters);
    return 0;
  });
}

int cmd_extract(const Options& o) {
  auto cfg = load_config(o);
  const auto g = load_graph(o);
  const auto dir = output_dir(o);
  stage("extract", [&] {
    const auto h = extract_hierarchy(g, build_filtration(g, cfg.levels));
    write_json_file(dir / "hierarchy.json", hierarchy_to_json(g, h));
    return 0;
  });
  return 0;
}

int cmd_layout(const Options& o) {
  auto cfg = load_config(o);
  const auto g = load_graph(o);
  const auto h = load_hierarchy(g, o);
  const auto boxes = label_boxes(g, h, cfg);
  const auto dir = output_dir(o);
  if (o.baseline) {
    compute_baseline(g, h, boxes, cfg, dir);
    return 0;
  }
  const Layout final_layout = compute_layout(g, h, boxes, cfg, dir);
  stage("layout", [&] {
    write_layout(dir / "layout.json", g, final_layout, h.tree_pairs(g, h.levels()), boxes);
    return 0;
  });
  return 0;
}

std::vector<Layout> load_levels(const WeightedGraph& g, const LevelHierarchy& h, const Options& o) {
  return stage("metrics", [&] {
    std::vector<Layout> layouts;
    for (const auto& file : o.layouts) layouts.push_back(layout_from_json(g, read_json_file(file)));
    if (layouts.size() == 1) return extract_levels(layouts.front(), h);
    if (layouts.size() != static_cast<std::size_t>(h.levels()))
      throw Error(ErrorCode::WrongLength, "pass one layout, or one per level");
    return layouts;
  });
}

int cmd_metrics(std::ostream& out, const Options& o) {
  auto cfg = load_config(o);
  const auto g = load_graph(o);
  const auto h = load_hierarchy(g, o);
  const auto boxes = label_boxes(g, h, cfg);
  const auto levels = load_levels(g, h, o);
  const auto r = make_report(levels, g, h, boxes, cfg, "external");
  const auto dir = output_dir(o);
  emit_metrics(out, dir / "metrics.json", r, "metrics");
  return 0;
}

int cmd_export(const Options& o) {
  auto cfg = load_config(o);
  const auto g = load_graph(o);
  const auto h = load_hierarchy(g, o);
  const auto boxes = label_boxes(g, h, cfg);
  const Layout final_layout =
      stage("export", [&] { return layout_from_json(g, read_json_file(o.layouts.front())); });
  export_layers(output_dir(o), final_layout, h, boxes, g, cfg);
  return 0;
}

int cmd_run(std::ostream& out, const Options& o) {
  auto cfg = load_config(o);
  const auto g = load_graph(o);
  const auto dir = output_dir(o);
  const auto h = stage("extract", [&] {
    auto h = extract_hierarchy(g, build_filtration(g, cfg.levels));
    write_json_file(dir / "hierarchy.json", hierarchy_to_json(g, h));
    return h;
  });
  const auto boxes = label_boxes(g, h, cfg);
  const Layout final_layout = compute_layout(g, h, boxes, cfg, dir);
  stage("layout", [&] {
    write_layout(dir / "layout.json", g, final_layout, h.tree_pairs(g, h.levels()), boxes);
    return 0;
  });
  const auto levels = extract_levels(final_layout, h);
  emit_metrics(out, dir / "metrics.json", make_report(levels, g, h, boxes, cfg, "zmlt"), "zmlt");
  export_layers(dir, final_layout, h, boxes, g, cfg);
  if (o.baseline) {
    const Layout base = compute_baseline(g, h, boxes, cfg, dir);
    const auto base_levels = extract_levels(base, h);
    emit_metrics(out, dir / "baseline_metrics.json", make_report(base_levels, g, h, boxes, cfg, "baseline"),
                 "baseline");
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zoomable multi-level tree layouts", "zmlt"};
  app.require_subcommand(1);
  Options o;

  auto* extract = app.add_subcommand("extract", "Build the level hierarchy (hierarchy.json)");
  add_common(*extract, o);
  extract->add_option("--out", o.out, "Output directory");

  auto* layout = app.add_subcommand("layout", "Draw a hierarchy (stage and final layouts)");
  add_common(*layout, o);
  layout->add_option("--hierarchy", o.hierarchy, "hierarchy.json")->required();
  layout->add_option("--out", o.out, "Output directory");
  layout->add_flag("--baseline", o.baseline, "Radial drawing scaled until labels stop overlapping");

  auto* metrics = app.add_subcommand("metrics", "Score layouts of a hierarchy (metrics.json)");
  add_common(*metrics, o);
  metrics->add_option("--hierarchy", o.hierarchy, "hierarchy.json")->required();
  metrics->add_option("--layout", o.layouts, "Final layout, or one layout per level")->required();
  metrics->add_option("--out", o.out, "Output directory");

  auto* exporter = app.add_subcommand("export", "Write GeoJSON map layers");
  add_common(*exporter, o);
  exporter->add_option("--hierarchy", o.hierarchy, "hierarchy.json")->required();
  exporter->add_option("--layout", o.layouts, "Final layout")->required()->expected(1);
  exporter->add_option("--out", o.out, "Output directory");

  auto* runner = app.add_subcommand("run", "Run every stage end to end");
  add_common(*runner, o);
  runner->add_option("--out", o.out, "Output directory");
  runner->add_flag("--baseline", o.baseline, "Also compute the scaled radial baseline");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "zmlt: error: cli: BadConfig: " << e.what() << '\n';
    return 1;
  }

  try {
    if (extract->parsed()) return cmd_extract(o);
    if (layout->parsed()) return cmd_layout(o);
    if (metrics->parsed()) return cmd_metrics(out, o);
    if (exporter->parsed()) return cmd_export(o);
    return cmd_run(out, o);
  } catch (const StageError& e) {
    std::string message = e.message;
    std::replace(message.begin(), message.end(), '\n', ' ');
    err << "zmlt: error: " << e.stage << ": " << e.code << ": " << message << '\n';
  } catch (const std::exception& e) {
    err << "zmlt: error: internal: Unexpected: " << e.what() << '\n';
  }
  return 1;
}

}  // namespace zmlt::cli
