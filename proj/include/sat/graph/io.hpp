#pragma once

#include <filesystem>
#include <optional>

#include "sat/graph/graph.hpp"

namespace sat::graph {

namespace fs = std::filesystem;

struct GraphPaths {
  fs::path edges;
  fs::path attrs;
  std::optional<fs::path> labels;
};

/// edges.tsv, attrs.tsv and (when present) labels.tsv inside `dir`.
GraphPaths dataset_paths(const fs::path& dir);

/// Parses the tab-separated dataset files. Errors are DataError messages of the form
/// "<file>:<line>: <problem>".
AttributedGraph load_graph(const GraphPaths& paths, AttrKind kind);

/// Writes the three files into `dir` (created if needed); labels only when present.
void save_graph(const AttributedGraph& g, const fs::path& dir);

}  // namespace sat::graph
