#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "sat/graph/graph.hpp"
#include "sat/model/config.hpp"

namespace sat::baselines {

using num::Tensor;

enum class BaselineKind { NeighAggre, VaeLatentAggre, GnnGcn, GnnGat };

inline constexpr std::array<BaselineKind, 4> kAllBaselines = {BaselineKind::NeighAggre, BaselineKind::VaeLatentAggre,
                                                              BaselineKind::GnnGcn, BaselineKind::GnnGat};

/// "neighaggre", "vae", "gnn-gcn", "gnn-gat"
std::string to_string(BaselineKind kind);
/// Throws ConfigError on an unknown name.
BaselineKind parse_baseline_kind(const std::string& s);

/// Mean of `rows` over each target's one-hop neighbors that have a row (row_of[v] >= 0).
/// Targets without such a neighbor get a zero row.
Tensor neighbor_mean(const Tensor& rows, std::span<const long> row_of,
                     const std::vector<std::vector<std::size_t>>& adjacency, std::span<const std::size_t> targets);

/// Mean pooling of observed one-hop neighbors' attributes for each target node.
/// Training-free and deterministic.
Tensor neigh_aggre(const graph::AttributedGraph& g, std::span<const std::size_t> observed,
                   std::span<const std::size_t> targets);

/// Structure-only regression: the SAT structure encoder and attribute decoder trained on
/// the cross-stream attribute loss alone (λ_c = 1, no self, structure or adversarial terms).
model::TrainConfig gnn_regression_config(model::TrainConfig base, model::Backbone backbone);

}  // namespace sat::baselines
