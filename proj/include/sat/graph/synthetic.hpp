#pragma once

#include <cstdint>
#include <vector>

#include "sat/graph/graph.hpp"

namespace sat::graph {

/// Stochastic block model. Node i belongs to the block given by its position in
/// block_sizes; attributes are the one-hot block indicator and labels the block id.
AttributedGraph make_sbm(const std::vector<std::size_t>& block_sizes, double p_in, double p_out,
                         std::uint64_t seed);

struct CitationLikeOptions {
  std::size_t n_nodes = 300;
  std::size_t n_classes = 4;
  std::size_t n_attrs = 120;
  std::size_t attrs_per_node = 8;
  double avg_degree = 4.0;
  double homophily = 0.85;        // probability an edge stays inside the class
  double attr_class_bias = 0.75;  // probability an attribute comes from the class vocabulary
};

/// Small categorical graph with class-correlated structure and attributes, for
/// exercising the full pipeline without external data.
AttributedGraph make_citation_like(const CitationLikeOptions& opt, std::uint64_t seed);

}  // namespace sat::graph
