#include "sat/graph/graph.hpp"

#include <algorithm>
#include <cmath>

#include "sat/errors.hpp"

namespace sat::graph {

std::string to_string(AttrKind kind) { return kind == AttrKind::Categorical ? "categorical" : "real"; }

AttrKind parse_attr_kind(const std::string& s) {
  if (s == "categorical") return AttrKind::Categorical;
  if (s == "real") return AttrKind::Real;
  throw ConfigError("unknown attribute kind '" + s + "' (expected categorical or real)");
}

Edge make_edge(std::size_t a, std::size_t b) {
  if (a == b) throw DataError("self-loop on node " + std::to_string(a));
  return a < b ? Edge{a, b} : Edge{b, a};
}

std::vector<Edge> canonical_edges(std::vector<Edge> edges, std::size_t n) {
  for (Edge& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw DataError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                      ") has an endpoint outside [0, " + std::to_string(n) + ")");
    }
    e = make_edge(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

void AttributedGraph::validate() const {
  if (attributes.rows() != n_nodes) throw DataError("attribute matrix rows do not match node count");
  for (const Edge& e : edges) {
    if (e.u >= e.v || e.v >= n_nodes) throw DataError("edge list is not canonical");
  }
  if (!std::is_sorted(edges.begin(), edges.end()) ||
      std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw DataError("edge list is not sorted and unique");
  }
  if (attr_kind == AttrKind::Categorical) {
    for (double v : attributes.values()) {
      if (v != 0.0 && v != 1.0) throw DataError("categorical attribute value outside {0, 1}");
    }
  }
  if (!labels.empty()) {
    if (labels.size() != n_nodes) throw DataError("label count does not match node count");
    for (int y : labels) {
      if (y < -1 || (y >= 0 && static_cast<std::size_t>(y) >= class_count)) {
        throw DataError("label outside [0, class_count)");
      }
    }
  }
}

std::vector<std::vector<std::size_t>> adjacency_lists(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (const Edge& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

SparseMatrix adjacency_with_self_loops(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<num::SparseEntry> entries;
  entries.reserve(2 * edges.size() + n);
  for (std::size_t i = 0; i < n; ++i) entries.push_back({i, i, 1.0});
  for (const Edge& e : edges) {
    entries.push_back({e.u, e.v, 1.0});
    entries.push_back({e.v, e.u, 1.0});
  }
  return SparseMatrix(n, n, std::move(entries));
}

SparseMatrix normalize_adjacency(const std::vector<Edge>& edges, std::size_t n) {
  const SparseMatrix a = adjacency_with_self_loops(n, edges);
  std::vector<double> inv_sqrt(n);
  for (std::size_t i = 0; i < n; ++i) inv_sqrt[i] = 1.0 / std::sqrt(static_cast<double>(a.row_nnz(i)));
  std::vector<num::SparseEntry> entries;
  entries.reserve(a.nnz());
  const auto rows = a.row_index();
  const auto cols = a.col_index();
  for (std::size_t k = 0; k < a.nnz(); ++k) {
    entries.push_back({rows[k], cols[k], inv_sqrt[rows[k]] * inv_sqrt[cols[k]]});
  }
  return SparseMatrix(n, n, std::move(entries));
}

double bce_pos_weight(std::size_t total, std::size_t nonzeros) {
  if (nonzeros == 0) throw DataError("binary target has no nonzero entries");
  if (nonzeros > total) throw std::invalid_argument("more nonzeros than entries");
  return static_cast<double>(total - nonzeros) / static_cast<double>(nonzeros);
}

double bce_pos_weight(const SparseMatrix& target) {
  std::size_t nz = 0;
  for (double v : target.values()) nz += v != 0.0;
  return bce_pos_weight(target.rows() * target.cols(), nz);
}

AttributeView observed_attribute_view(const AttributedGraph& g, std::vector<std::size_t> nodes) {
  std::sort(nodes.begin(), nodes.end());
  if (std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end()) {
    throw std::invalid_argument("observed_attribute_view: repeated node id");
  }
  AttributeView view;
  view.row_of.assign(g.n_nodes, -1);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] >= g.n_nodes) throw std::out_of_range("observed_attribute_view: node id out of range");
    view.row_of[nodes[i]] = static_cast<long>(i);
  }
  view.sparse = g.attributes.select_rows(nodes);
  view.dense = view.sparse.to_dense();
  view.nodes = std::move(nodes);
  return view;
}

}  // namespace sat::graph
