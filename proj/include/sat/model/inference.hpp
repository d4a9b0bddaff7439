#pragma once

#include <span>
#include <utility>
#include <vector>

#include "sat/model/data.hpp"
#include "sat/model/sat_model.hpp"

namespace sat::model {

/// Inference-mode forwards (no dropout, no gradients).
Tensor infer_structure_latents(SatModel& m, const SatData& data);
Tensor infer_attribute_latents(SatModel& m, const SparseMatrix& x);

/// Decoded attributes of latent rows: probabilities for categorical data, raw values otherwise.
Tensor decode_attribute_values(SatModel& m, const Tensor& z, AttrKind kind);

/// X̂ for the listed nodes, decoded from their structure latents.
Tensor complete_attributes(SatModel& m, const SatData& data, std::span<const std::size_t> nodes);

/// σ(E(z_src) · E(z_dst)ᵀ).
Tensor structure_scores(SatModel& m, const Tensor& z_src, const Tensor& z_dst);

/// D_A embeddings of the structure latents, one row per node.
Tensor edge_embeddings(SatModel& m, const Tensor& z_a);
/// σ(e_u · e_v); throws std::out_of_range for bad node ids.
double link_probability(const Tensor& emb, std::size_t u, std::size_t v);

/// Link probabilities for node pairs under the structure encoder's graph.
std::vector<double> score_links(SatModel& m, const SatData& data,
                                std::span<const std::pair<std::size_t, std::size_t>> pairs);

/// Auto resolves per task and attribute kind.
Selection resolve_selection(const TrainConfig& cfg, const SatData& data);

/// Validation criterion, oriented so that larger is better (MSE is negated).
double selection_score(SatModel& m, const SatData& data, Selection sel, const Tensor& z_a);

/// Validation criterion of predicted attributes for the validation nodes (rows in
/// data.validation order); -MSE or Recall@min(10, F).
double completion_score(const Tensor& pred, const SatData& data, Selection sel);

}  // namespace sat::model
