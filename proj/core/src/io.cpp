#include "zmlt/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace zmlt {

namespace {

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<double> to_number(std::string_view s) {
  s = trim(s);
  double value = 0.0;
  const char* end = s.data() + s.size();
  const char* begin = s.data();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || begin == end) return std::nullopt;
  return value;
}

/// Whitespace-separated tokens with double-quoted strings; an unquoted token
/// starting with '#' begins a comment.
std::vector<std::string> split_tokens(std::string_view line, std::size_t line_no) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    std::string token;
    if (line[i] == '"') {
      ++i;
      bool closed = false;
      while (i < line.size()) {
        const char c = line[i++];
        if (c == '\\' && i < line.size()) {
          token += line[i++];
        } else if (c == '"') {
          closed = true;
          break;
        } else {
          token += c;
        }
      }
      if (!closed) parse_error(line_no, "unterminated quote");
    } else {
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) token += line[i++];
    }
    out.push_back(std::move(token));
  }
  return out;
}

double weight_token(const std::string& token, std::size_t line_no) {
  const auto w = to_number(token);
  if (!w) parse_error(line_no, "'" + token + "' is not a number");
  return *w;
}

WeightedGraph assemble(std::vector<NodeRecord> nodes, const std::vector<EdgeRecord>& edges) {
  return WeightedGraph(std::move(nodes), edges);
}

// DOT subset lexer.
enum class Tok { Id, Punct, EdgeOp, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
};

class DotLexer {
 public:
  explicit DotLexer(std::string text) : text_(std::move(text)) {}

  Token next() {
    skip();
    if (pos_ >= text_.size()) return {Tok::End, "", line_};
    const char c = text_[pos_];
    if (c == '-' && pos_ + 1 < text_.size() && (text_[pos_ + 1] == '-' || text_[pos_ + 1] == '>')) {
      pos_ += 2;
      return {Tok::EdgeOp, "--", line_};
    }
    if (std::string_view("{}[]=,;:").find(c) != std::string_view::npos) {
      ++pos_;
      return {Tok::Punct, std::string(1, c), line_};
    }
    if (c == '"') {
      ++pos_;
      std::string s;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\\' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '"') ++pos_;
        if (text_[pos_] == '\n') ++line_;
        s += text_[pos_++];
      }
      if (pos_ >= text_.size()) parse_error(line_, "unterminated quote");
      ++pos_;
      return {Tok::Id, s, line_};
    }
    std::string s;
    while (pos_ < text_.size()) {
      const char d = text_[pos_];
      const bool word = std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '.' ||
                        static_cast<unsigned char>(d) >= 0x80 ||
                        (d == '-' && !(pos_ + 1 < text_.size() && (text_[pos_ + 1] == '-' || text_[pos_ + 1] == '>')));
      if (!word) break;
      s += d;
      ++pos_;
    }
    if (s.empty()) parse_error(line_, std::string("unexpected character '") + c + "'");
    return {Tok::Id, s, line_};
  }

 private:
  void skip() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#' || (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/')) {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
        pos_ += 2;
        while (pos_ + 1 < text_.size() && !(text_[pos_] == '*' && text_[pos_ + 1] == '/')) {
          if (text_[pos_] == '\n') ++line_;
          ++pos_;
        }
        pos_ += 2;
      } else {
        break;
      }
    }
  }

  std::string text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

class DotParser {
 public:
  explicit DotParser(std::string text) : lex_(std::move(text)) { advance(); }

  WeightedGraph parse() {
    if (look_.kind == Tok::Id && (look_.text == "strict")) advance();
    if (look_.kind != Tok::Id || (look_.text != "graph" && look_.text != "digraph"))
      parse_error(look_.line, "expected 'graph'");
    advance();
    if (look_.kind == Tok::Id) advance();
    expect("{");
    while (!(look_.kind == Tok::Punct && look_.text == "}")) {
      if (look_.kind == Tok::End) parse_error(look_.line, "missing '}'");
      statement();
    }
    return assemble(std::move(nodes_), edges_);
  }

 private:
  void advance() { look_ = lex_.next(); }

  void expect(const char* punct) {
    if (look_.kind != Tok::Punct || look_.text != punct)
      parse_error(look_.line, std::string("expected '") + punct + "'");
    advance();
  }

  std::map<std::string, std::string> attributes() {
    std::map<std::string, std::string> out;
    while (look_.kind == Tok::Punct && look_.text == "[") {
      advance();
      while (!(look_.kind == Tok::Punct && look_.text == "]")) {
        if (look_.kind != Tok::Id) parse_error(look_.line, "expected attribute name");
        std::string key = look_.text;
        advance();
        expect("=");
        if (look_.kind != Tok::Id) parse_error(look_.line, "expected attribute value");
        out[key] = look_.text;
        advance();
        if (look_.kind == Tok::Punct && (look_.text == "," || look_.text == ";")) advance();
      }
      advance();
    }
    return out;
  }

  NodeRecord& node(const std::string& id) {
    auto [it, fresh] = where_.emplace(id, nodes_.size());
    if (fresh) nodes_.push_back({id, id, 1.0});
    return nodes_[it->second];
  }

  double weight_of(const std::map<std::string, std::string>& attrs, std::size_t line) {
    auto it = attrs.find("weight");
    if (it == attrs.end()) return 1.0;
    const auto w = to_number(it->second);
    if (!w) parse_error(line, "weight '" + it->second + "' is not a number");
    return *w;
  }

  void statement() {
    const std::size_t line = look_.line;
    if (look_.kind != Tok::Id) parse_error(line, "expected a statement");
    std::string first = look_.text;
    advance();
    if (first == "graph" || first == "node" || first == "edge") {
      if (look_.kind == Tok::Punct && look_.text == "[") {
        attributes();
        end_statement();
        return;
      }
    }
    if (look_.kind == Tok::Punct && look_.text == "=") {
      advance();
      if (look_.kind != Tok::Id) parse_error(look_.line, "expected a value");
      advance();
      end_statement();
      return;
    }
    if (look_.kind == Tok::Punct && look_.text == ":") parse_error(line, "ports are not supported");
    std::vector<std::string> chain{first};
    while (look_.kind == Tok::EdgeOp) {
      advance();
      if (look_.kind != Tok::Id) parse_error(look_.line, "expected a node id after the edge operator");
      chain.push_back(look_.text);
      advance();
    }
    const auto attrs = attributes();
    if (chain.size() == 1) {
      NodeRecord& rec = node(first);
      if (auto it = attrs.find("label"); it != attrs.end()) rec.label = it->second;
      if (attrs.contains("weight")) rec.weight = weight_of(attrs, line);
    } else {
      const double w = weight_of(attrs, line);
      for (const auto& id : chain) node(id);
      for (std::size_t k = 0; k + 1 < chain.size(); ++k) edges_.push_back({chain[k], chain[k + 1], w});
    }
    end_statement();
  }

  void end_statement() {
    if (look_.kind == Tok::Punct && look_.text == ";") advance();
  }

  DotLexer lex_;
  Token look_{Tok::End, "", 0};
  std::vector<NodeRecord> nodes_;
  std::vector<EdgeRecord> edges_;
  std::map<std::string, std::size_t> where_;
};

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

GraphFormat parse_graph_format(std::string_view name) {
  if (name == "simple") return GraphFormat::Simple;
  if (name == "dot") return GraphFormat::Dot;
  throw Error(ErrorCode::BadConfig, "unknown graph format '" + std::string(name) + "'");
}

WeightedGraph read_graph_simple(std::istream& in) {
  std::vector<NodeRecord> nodes;
  std::vector<EdgeRecord> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto tokens = split_tokens(body, line_no);
    if (tokens.size() != 4) parse_error(line_no, "expected 4 fields, found " + std::to_string(tokens.size()));
    if (tokens[0] == "node") {
      nodes.push_back({tokens[1], tokens[2], weight_token(tokens[3], line_no)});
    } else if (tokens[0] == "edge") {
      edges.push_back({tokens[1], tokens[2], weight_token(tokens[3], line_no)});
    } else {
      parse_error(line_no, "unknown record '" + tokens[0] + "'");
    }
  }
  return assemble(std::move(nodes), edges);
}

WeightedGraph read_graph_dot(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return DotParser(buf.str()).parse();
}

WeightedGraph read_graph_file(const std::filesystem::path& path, GraphFormat format) {
  std::istringstream in(read_text(path));
  return format == GraphFormat::Dot ? read_graph_dot(in) : read_graph_simple(in);
}

std::string quote_token(std::string_view token) {
  const bool plain = !token.empty() && token.front() != '"' && token.front() != '#' &&
                     std::none_of(token.begin(), token.end(), [](char c) {
                       return std::isspace(static_cast<unsigned char>(c)) || c == '"' || c == '\\';
                     });
  if (plain) return std::string(token);
  std::string out = "\"";
  for (char c : token) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

void write_graph_simple(std::ostream& out, const WeightedGraph& g) {
  auto number = [](double v) { return nlohmann::json(v).dump(); };
  for (const auto& n : g.nodes())
    out << "node " << quote_token(n.id) << ' ' << quote_token(n.label) << ' ' << number(n.weight) << '\n';
  for (const auto& e : g.edges())
    out << "edge " << quote_token(g.id(e.ends.u)) << ' ' << quote_token(g.id(e.ends.v)) << ' ' << number(e.weight)
        << '\n';
}

nlohmann::json hierarchy_to_json(const WeightedGraph& g, const LevelHierarchy& h) {
  nlohmann::json level_of = nlohmann::json::object();
  for (NodeIndex v = 0; v < g.node_count(); ++v) level_of[g.id(v)] = h.filtration.level_of.at(v);
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& tree : h.trees) {
    nlohmann::json edges = nlohmann::json::array();
    for (EdgeIndex e : tree) edges.push_back({g.id(g.edge(e).ends.u), g.id(g.edge(e).ends.v)});
    trees.push_back(std::move(edges));
  }
  nlohmann::json steiner = nlohmann::json::array();
  for (const auto& level : h.steiner) {
    nlohmann::json ids = nlohmann::json::array();
    for (NodeIndex v : level) ids.push_back(g.id(v));
    steiner.push_back(std::move(ids));
  }
  return {{"levels", h.levels()},
          {"percentages", h.filtration.percentages},
          {"level_of", level_of},
          {"trees", trees},
          {"steiner", steiner}};
}

LevelHierarchy hierarchy_from_json(const WeightedGraph& g, const nlohmann::json& doc) {
  LevelHierarchy h;
  try {
    NodeFiltration f;
    f.levels = doc.at("levels").get<int>();
    if (f.levels < 1) throw Error(ErrorCode::InvalidLevel, "hierarchy needs at least one level");
    f.level_of.assign(g.node_count(), 0);
    for (const auto& [id, level] : doc.at("level_of").items()) f.level_of[g.index_of(id)] = level.get<int>();
    f.counts.assign(static_cast<std::size_t>(f.levels), 0);
    for (int level : f.level_of) {
      if (level < 1 || level > f.levels) throw Error(ErrorCode::InvalidLevel, "node level out of range");
      for (int i = level; i <= f.levels; ++i) ++f.counts[static_cast<std::size_t>(i - 1)];
    }
    if (doc.contains("percentages")) {
      f.percentages = doc.at("percentages").get<std::vector<double>>();
    } else {
      for (auto c : f.counts) f.percentages.push_back(static_cast<double>(c) / static_cast<double>(g.node_count()));
    }
    if (f.percentages.size() != static_cast<std::size_t>(f.levels))
      throw Error(ErrorCode::WrongLength, "one percentage per level is required");
    std::vector<std::vector<EdgeIndex>> trees;
    for (const auto& tree : doc.at("trees")) {
      std::vector<EdgeIndex> edges;
      for (const auto& pair : tree) {
        const auto u = g.index_of(pair.at(0).get<std::string>());
        const auto v = g.index_of(pair.at(1).get<std::string>());
        const auto e = g.find_edge(u, v);
        if (!e) throw Error(ErrorCode::NotATree, "tree edge " + g.id(u) + " -- " + g.id(v) + " is not in the graph");
        edges.push_back(*e);
      }
      trees.push_back(std::move(edges));
    }
    h = make_hierarchy(g, std::move(f), std::move(trees));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("hierarchy document: ") + e.what());
  }
  if (auto err = check_hierarchy(g, h)) throw *err;
  return h;
}

nlohmann::json layout_to_json(const WeightedGraph& g, const Layout& layout, std::size_t crossings,
                              std::size_t overlaps) {
  nlohmann::json positions = nlohmann::json::object();
  for (NodeIndex v : layout.nodes()) positions[g.id(v)] = {layout[v].x, layout[v].y};
  return {{"positions", positions}, {"crossings", crossings}, {"overlaps", overlaps}};
}

Layout layout_from_json(const WeightedGraph& g, const nlohmann::json& doc) {
  try {
    Layout layout(g.node_count());
    for (const auto& [id, p] : doc.at("positions").items())
      layout.set(g.index_of(id), {p.at(0).get<double>(), p.at(1).get<double>()});
    return layout;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("layout document: ") + e.what());
  }
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, "'" + path.string() + "': " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out << doc.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path.string() + "'");
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    const auto value = to_number(item);
    if (!value) throw Error(ErrorCode::BadConfig, "'" + std::string(item) + "' is not a number");
    out.push_back(*value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

void apply_config_value(RunConfig& cfg, std::string_view key, std::string_view value) {
  value = trim(value);
  auto number = [&]() {
    const auto v = to_number(value);
    if (!v) throw Error(ErrorCode::BadConfig, std::string(key) + ": '" + std::string(value) + "' is not a number");
    return *v;
  };
  auto integer = [&]() {
    const double v = number();
    if (v != std::floor(v) || v < 0.0 || v > 9.007199254740992e15)
      throw Error(ErrorCode::BadConfig, std::string(key) + " must be a non-negative integer");
    return static_cast<std::uint64_t>(v);
  };
  if (key == "levels") cfg.levels = parse_number_list(value);
  else if (key == "fonts") cfg.fonts = parse_number_list(value);
  else if (key == "seed") cfg.force.rng_seed = integer();
  else if (key == "iterations") cfg.force.iterations = static_cast<int>(std::min<std::uint64_t>(integer(), 1u << 30));
  else if (key == "delta") {
    cfg.force.delta = number();
    cfg.fit_delta = false;
  } else if (key == "L0") {
    cfg.force.base_edge_length = number();
    cfg.fit_L0 = false;
  }
  else if (key == "gamma") cfg.force.level_decay = number();
  else if (key == "gamma_e") cfg.force.node_edge_margin = number();
  else if (key == "safety_divisor") cfg.force.safety_divisor = number();
  else if (key == "repulsion") cfg.force.repulsion = number();
  else if (key == "cooling") cfg.force.cooling = number();
  else if (key == "char_width") cfg.labels.char_width_factor = number();
  else if (key == "line_height") cfg.labels.line_height_factor = number();
  else if (key == "font_name") cfg.font_name = std::string(value);
  else if (key == "clusters") cfg.clusters = integer();
  else throw Error(ErrorCode::BadConfig, "unknown configuration key '" + std::string(key) + "'");
}

RunConfig parse_config(std::istream& in, RunConfig base) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = trim(body);
    if (body.empty()) continue;
    auto split = body.find_first_of("=:");
    if (split == std::string_view::npos) split = body.find_first_of(" \t");
    if (split == std::string_view::npos)
      throw Error(ErrorCode::BadConfig, "line " + std::to_string(line_no) + ": expected 'key = value'");
    apply_config_value(base, trim(body.substr(0, split)), body.substr(split + 1));
  }
  base.force.validate();
  return base;
}

RunConfig read_config_file(const std::filesystem::path& path, RunConfig base) {
  std::istringstream in(read_text(path));
  return parse_config(in, std::move(base));
}

void fit_force_to_labels(RunConfig& cfg, double mean_label_width) {
  if (cfg.fit_L0 && mean_label_width > 0.0 && std::isfinite(mean_label_width))
    cfg.force.base_edge_length = mean_label_width;
  if (cfg.fit_delta) cfg.force.delta = cfg.force.base_edge_length;
  cfg.fit_L0 = false;
  cfg.fit_delta = false;
  cfg.force.validate();
}

nlohmann::json config_to_json(const RunConfig& cfg) {
  return {{"levels", cfg.levels},
          {"fonts", cfg.fonts},
          {"seed", cfg.force.rng_seed},
          {"iterations", cfg.force.iterations},
          {"delta", cfg.force.delta},
          {"L0", cfg.force.base_edge_length},
          {"gamma", cfg.force.level_decay},
          {"gamma_e", cfg.force.node_edge_margin},
          {"safety_divisor", cfg.force.safety_divisor},
          {"repulsion", cfg.force.repulsion},
          {"cooling", cfg.force.cooling},
          {"char_width", cfg.labels.char_width_factor},
          {"line_height", cfg.labels.line_height_factor},
          {"font_name", cfg.font_name},
          {"clusters", cfg.clusters}};
}

}  // namespace zmlt
