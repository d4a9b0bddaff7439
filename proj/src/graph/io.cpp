#include "sat/graph/io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <string_view>

#include "sat/errors.hpp"

namespace sat::graph {

namespace {

class LineReader {
 public:
  explicit LineReader(const fs::path& path) : path_(path), in_(path) {
    if (!in_) throw DataError("cannot open " + path.string());
  }

  // Next non-blank line split on tabs/spaces; false at end of file.
  bool next(std::vector<std::string_view>& fields) {
    while (std::getline(in_, line_)) {
      ++line_no_;
      if (!line_.empty() && line_.back() == '\r') line_.pop_back();
      fields.clear();
      std::size_t i = 0;
      while (i < line_.size()) {
        while (i < line_.size() && (line_[i] == '\t' || line_[i] == ' ')) ++i;
        std::size_t j = i;
        while (j < line_.size() && line_[j] != '\t' && line_[j] != ' ') ++j;
        if (j > i) fields.emplace_back(line_.data() + i, j - i);
        i = j;
      }
      if (!fields.empty()) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw DataError(path_.filename().string() + ":" + std::to_string(line_no_) + ": " + what);
  }

  std::size_t index(std::string_view s) const {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) fail("expected a non-negative integer, got '" + std::string(s) + "'");
    return v;
  }

  double real(std::string_view s) const {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) fail("expected a number, got '" + std::string(s) + "'");
    return v;
  }

  void expect_fields(const std::vector<std::string_view>& f, std::size_t n) const {
    if (f.size() != n) fail("expected " + std::to_string(n) + " fields, found " + std::to_string(f.size()));
  }

 private:
  fs::path path_;
  std::ifstream in_;
  std::string line_;
  std::size_t line_no_ = 0;
};

}  // namespace

GraphPaths dataset_paths(const fs::path& dir) {
  GraphPaths p{dir / "edges.tsv", dir / "attrs.tsv", std::nullopt};
  if (fs::exists(dir / "labels.tsv")) p.labels = dir / "labels.tsv";
  return p;
}

AttributedGraph load_graph(const GraphPaths& paths, AttrKind kind) {
  AttributedGraph g;
  g.attr_kind = kind;
  std::vector<std::string_view> f;

  std::size_t n_attrs = 0;
  {
    LineReader r(paths.attrs);
    if (!r.next(f)) throw DataError(paths.attrs.filename().string() + ": missing N<TAB>F header");
    r.expect_fields(f, 2);
    g.n_nodes = r.index(f[0]);
    n_attrs = r.index(f[1]);
    std::vector<num::SparseEntry> entries;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    while (r.next(f)) {
      r.expect_fields(f, 3);
      const std::size_t node = r.index(f[0]);
      const std::size_t dim = r.index(f[1]);
      const double value = r.real(f[2]);
      if (node >= g.n_nodes) r.fail("node " + std::to_string(node) + " outside [0, " + std::to_string(g.n_nodes) + ")");
      if (dim >= n_attrs) r.fail("dimension " + std::to_string(dim) + " outside [0, " + std::to_string(n_attrs) + ")");
      if (!seen.insert({node, dim}).second) r.fail("duplicate attribute triplet for node " + std::to_string(node) +
                                                   ", dimension " + std::to_string(dim));
      if (kind == AttrKind::Categorical && value != 0.0 && value != 1.0) {
        r.fail("categorical attribute value must be 0 or 1, got " + std::string(f[2]));
      }
      if (value != 0.0) entries.push_back({node, dim, value});
    }
    g.attributes = num::SparseMatrix(g.n_nodes, n_attrs, std::move(entries));
  }

  {
    LineReader r(paths.edges);
    std::vector<Edge> edges;
    while (r.next(f)) {
      r.expect_fields(f, 2);
      const std::size_t u = r.index(f[0]);
      const std::size_t v = r.index(f[1]);
      if (u >= g.n_nodes || v >= g.n_nodes) r.fail("endpoint outside [0, " + std::to_string(g.n_nodes) + ")");
      if (u == v) r.fail("self-loop on node " + std::to_string(u));
      edges.push_back(make_edge(u, v));
    }
    g.edges = canonical_edges(std::move(edges), g.n_nodes);
  }

  if (paths.labels) {
    LineReader r(*paths.labels);
    g.labels.assign(g.n_nodes, -1);
    int max_label = -1;
    while (r.next(f)) {
      r.expect_fields(f, 2);
      const std::size_t node = r.index(f[0]);
      const std::size_t y = r.index(f[1]);
      if (node >= g.n_nodes) r.fail("node outside [0, " + std::to_string(g.n_nodes) + ")");
      if (g.labels[node] != -1) r.fail("duplicate label for node " + std::to_string(node));
      g.labels[node] = static_cast<int>(y);
      max_label = std::max(max_label, static_cast<int>(y));
    }
    g.class_count = static_cast<std::size_t>(max_label + 1);
  }
  g.validate();
  return g;
}

void save_graph(const AttributedGraph& g, const fs::path& dir) {
  fs::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name);
    if (!out) throw DataError("cannot write " + (dir / name).string());
    return out;
  };
  {
    std::ofstream out = open("edges.tsv");
    for (const Edge& e : g.edges) out << e.u << '\t' << e.v << '\n';
  }
  {
    std::ofstream out = open("attrs.tsv");
    out << g.n_nodes << '\t' << g.n_attrs() << '\n';
    char buf[32];
    for (const auto& e : g.attributes.entries()) {
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, e.value);
      (void)ec;
      out << e.row << '\t' << e.col << '\t' << std::string_view(buf, p - buf) << '\n';
    }
  }
  if (g.has_labels()) {
    std::ofstream out = open("labels.tsv");
    for (std::size_t i = 0; i < g.n_nodes; ++i) {
      if (g.labels[i] >= 0) out << i << '\t' << g.labels[i] << '\n';
    }
  }
}

}  // namespace sat::graph
