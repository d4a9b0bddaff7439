#include "sat/model/data.hpp"

#include <algorithm>

#include "sat/errors.hpp"

namespace sat::model {

namespace {

double attribute_pos_weight(const graph::AttributeView& v, AttrKind kind) {
  if (kind != AttrKind::Categorical) return 0.0;
  return graph::bce_pos_weight(v.sparse);
}

}  // namespace

SatData make_sat_data(const graph::AttributedGraph& g, const graph::NodeSplit& split, const graph::LinkSplit* link) {
  graph::check_partition(split, g.n_nodes);
  if (split.observed.empty()) throw DataError("node split has no observed nodes");
  SatData d;
  d.n_nodes = g.n_nodes;
  d.n_attrs = g.n_attrs();
  d.attr_kind = g.attr_kind;
  d.task = link ? Task::LinkPrediction : Task::Completion;
  d.x_obs = graph::observed_attribute_view(g, split.observed);
  d.x_val = graph::observed_attribute_view(g, split.validation);
  // ascending, so row r of every observed-node matrix is node observed[r]
  d.observed = d.x_obs.nodes;
  d.validation = d.x_val.nodes;
  d.missing = split.missing;
  std::sort(d.missing.begin(), d.missing.end());

  if (link) {
    d.structure_edges = graph::canonical_edges(link->train_pos, g.n_nodes);
    d.link = *link;
  } else {
    d.structure_edges = g.edges;
  }
  d.a_hat = graph::normalize_adjacency(d.structure_edges, g.n_nodes);
  d.a_self = graph::adjacency_with_self_loops(g.n_nodes, d.structure_edges);
  d.a_obs_rows = d.a_self.select_rows(d.observed);
  std::vector<num::SparseEntry> block;
  for (std::size_t r = 0; r < d.observed.size(); ++r) {
    for (std::size_t k = d.a_obs_rows.row_begin(r); k < d.a_obs_rows.row_end(r); ++k) {
      const long c = d.x_obs.row_of[d.a_obs_rows.col_index()[k]];
      if (c >= 0) block.push_back({r, static_cast<std::size_t>(c), 1.0});
    }
  }
  d.a_obs_block = SparseMatrix(d.observed.size(), d.observed.size(), std::move(block));

  d.pos_weight_x = attribute_pos_weight(d.x_obs, d.attr_kind);
  d.pos_weight_a = graph::bce_pos_weight(d.a_self);
  d.pos_weight_cross_a = graph::bce_pos_weight(d.a_obs_rows);
  d.pos_weight_cross_a_block = graph::bce_pos_weight(d.a_obs_block);
  return d;
}

}  // namespace sat::model
