#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "sat/numerics/sparse.hpp"

namespace sat::graph {

using num::SparseMatrix;
using num::Tensor;

enum class AttrKind { Categorical, Real };

std::string to_string(AttrKind kind);
/// Accepts "categorical" or "real"; throws ConfigError otherwise.
AttrKind parse_attr_kind(const std::string& s);

/// Undirected edge stored with u < v.
struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  auto operator<=>(const Edge&) const = default;
};

/// Orders the endpoints; throws DataError on a self-loop.
Edge make_edge(std::size_t a, std::size_t b);

struct AttributedGraph {
  std::size_t n_nodes = 0;
  std::vector<Edge> edges;   // sorted, unique
  SparseMatrix attributes;   // n_nodes × F
  AttrKind attr_kind = AttrKind::Categorical;
  std::vector<int> labels;   // empty, or one entry per node (-1 = unlabeled)
  std::size_t class_count = 0;

  std::size_t n_attrs() const { return attributes.cols(); }
  bool has_labels() const { return !labels.empty(); }
  /// Throws DataError when an invariant is violated.
  void validate() const;
};

/// Sorts and deduplicates; throws DataError on self-loops or out-of-range endpoints.
std::vector<Edge> canonical_edges(std::vector<Edge> edges, std::size_t n);

/// Neighbor lists from an undirected edge list, each sorted ascending.
std::vector<std::vector<std::size_t>> adjacency_lists(std::size_t n, const std::vector<Edge>& edges);

/// A + I with unit values.
SparseMatrix adjacency_with_self_loops(std::size_t n, const std::vector<Edge>& edges);

/// D̃^{-1/2}(A+I)D̃^{-1/2} where D̃ is the degree matrix of A+I.
SparseMatrix normalize_adjacency(const std::vector<Edge>& edges, std::size_t n);

/// (#zeros)/(#nonzeros) of a binary target with `total` entries. Throws on nnz == 0.
double bce_pos_weight(std::size_t total, std::size_t nonzeros);
double bce_pos_weight(const SparseMatrix& target);

/// Attribute rows of a node subset, densified in ascending node-id order.
struct AttributeView {
  std::vector<std::size_t> nodes;  // ascending
  std::vector<long> row_of;        // node id -> row in the view, -1 if absent
  SparseMatrix sparse;             // |nodes| × F
  Tensor dense;                    // |nodes| × F
};

AttributeView observed_attribute_view(const AttributedGraph& g, std::vector<std::size_t> nodes);

}  // namespace sat::graph
