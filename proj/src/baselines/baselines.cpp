#include "sat/baselines/baselines.hpp"

#include "sat/errors.hpp"

namespace sat::baselines {

std::string to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::NeighAggre: return "neighaggre";
    case BaselineKind::VaeLatentAggre: return "vae";
    case BaselineKind::GnnGcn: return "gnn-gcn";
    case BaselineKind::GnnGat: return "gnn-gat";
  }
  throw std::logic_error("unknown baseline kind");
}

BaselineKind parse_baseline_kind(const std::string& s) {
  for (BaselineKind k : kAllBaselines) {
    if (to_string(k) == s) return k;
  }
  throw ConfigError("unknown baseline '" + s + "'");
}

Tensor neighbor_mean(const Tensor& rows, std::span<const long> row_of,
                     const std::vector<std::vector<std::size_t>>& adjacency, std::span<const std::size_t> targets) {
  const std::size_t f = rows.cols();
  Tensor out = Tensor::matrix(targets.size(), f);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] >= adjacency.size()) throw std::out_of_range("neighbor_mean: target outside the graph");
    std::size_t count = 0;
    auto dst = out.row(i);
    for (std::size_t v : adjacency[targets[i]]) {
      const long r = row_of[v];
      if (r < 0) continue;
      const auto src = rows.row(static_cast<std::size_t>(r));
      for (std::size_t c = 0; c < f; ++c) dst[c] += src[c];
      ++count;
    }
    if (count > 1) {
      for (double& v : dst) v /= static_cast<double>(count);
    }
  }
  return out;
}

Tensor neigh_aggre(const graph::AttributedGraph& g, std::span<const std::size_t> observed,
                   std::span<const std::size_t> targets) {
  const graph::AttributeView view = graph::observed_attribute_view(g, {observed.begin(), observed.end()});
  return neighbor_mean(view.dense, view.row_of, graph::adjacency_lists(g.n_nodes, g.edges), targets);
}

model::TrainConfig gnn_regression_config(model::TrainConfig base, model::Backbone backbone) {
  base.backbone = backbone;
  base.terms = model::LossTerms{false, false, true, false, false};
  base.lambda_c = 1.0;
  return base;
}

}  // namespace sat::baselines
