#pragma once

#include <optional>
#include <vector>

#include "sat/graph/graph.hpp"
#include "sat/graph/split.hpp"
#include "sat/model/config.hpp"

namespace sat::model {

using graph::AttrKind;
using num::SparseMatrix;
using num::Tensor;

/// Everything a training run reads, precomputed once. Sparse members are referenced by
/// tapes during forward passes, so a SatData must outlive them.
struct SatData {
  std::size_t n_nodes = 0;
  std::size_t n_attrs = 0;
  AttrKind attr_kind = AttrKind::Categorical;
  Task task = Task::Completion;

  std::vector<std::size_t> observed;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> missing;
  graph::AttributeView x_obs;  // X^o
  graph::AttributeView x_val;  // attributes of validation nodes, used only for selection

  std::vector<graph::Edge> structure_edges;  // all edges, or training positives for link prediction
  SparseMatrix a_hat;                        // normalized adjacency for message passing
  SparseMatrix a_self;                       // A + I: attention mask and self-stream target
  SparseMatrix a_obs_rows;                   // rows of A + I for observed nodes (N_o × N)
  SparseMatrix a_obs_block;                  // observed × observed block of A + I

  double pos_weight_x = 0.0;
  double pos_weight_a = 0.0;
  double pos_weight_cross_a = 0.0;
  double pos_weight_cross_a_block = 0.0;

  std::optional<graph::LinkSplit> link;
};

/// Builds the training bundle. For link prediction `link` is required and only its
/// training positives are used for message passing and structure targets.
SatData make_sat_data(const graph::AttributedGraph& g, const graph::NodeSplit& split,
                      const graph::LinkSplit* link = nullptr);

}  // namespace sat::model
