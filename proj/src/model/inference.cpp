#include "sat/model/inference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sat/errors.hpp"
#include "sat/eval/metrics.hpp"

namespace sat::model {

using namespace num;

Tensor infer_structure_latents(SatModel& m, const SatData& data) {
  Tape tape;
  ForwardContext ctx{tape};
  return m.encode_structure(ctx, data.a_hat, data.a_self).value();
}

Tensor infer_attribute_latents(SatModel& m, const SparseMatrix& x) {
  Tape tape;
  ForwardContext ctx{tape};
  return m.encode_attributes(ctx, x).value();
}

Tensor decode_attribute_values(SatModel& m, const Tensor& z, AttrKind kind) {
  Tape tape;
  ForwardContext ctx{tape};
  Tensor out = m.decode_attributes(ctx, tape.constant(z)).value();
  if (kind == AttrKind::Categorical) {
    for (double& v : out.values()) v = sigmoid_scalar(v);
  }
  return out;
}

Tensor complete_attributes(SatModel& m, const SatData& data, std::span<const std::size_t> nodes) {
  const Tensor z_a = infer_structure_latents(m, data);
  Tape tape;
  Tensor rows = gather_rows(tape.constant(z_a), nodes).value();
  return decode_attribute_values(m, rows, data.attr_kind);
}

Tensor structure_scores(SatModel& m, const Tensor& z_src, const Tensor& z_dst) {
  Tape tape;
  ForwardContext ctx{tape};
  Tensor out = m.decode_structure_logits(ctx, tape.constant(z_src), tape.constant(z_dst)).value();
  for (double& v : out.values()) v = sigmoid_scalar(v);
  return out;
}

Tensor edge_embeddings(SatModel& m, const Tensor& z_a) {
  Tape tape;
  ForwardContext ctx{tape};
  return m.structure_embedding(ctx, tape.constant(z_a)).value();
}

double link_probability(const Tensor& emb, std::size_t u, std::size_t v) {
  if (u >= emb.rows() || v >= emb.rows()) throw std::out_of_range("link_probability: node id out of range");
  const auto a = emb.row(u);
  const auto b = emb.row(v);
  double dot = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) dot += a[c] * b[c];
  return sigmoid_scalar(dot);
}

std::vector<double> score_links(SatModel& m, const SatData& data,
                                std::span<const std::pair<std::size_t, std::size_t>> pairs) {
  const Tensor emb = edge_embeddings(m, infer_structure_latents(m, data));
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& [u, v] : pairs) out.push_back(link_probability(emb, u, v));
  return out;
}

Selection resolve_selection(const TrainConfig& cfg, const SatData& data) {
  if (cfg.selection != Selection::Auto) return cfg.selection;
  if (data.task == Task::LinkPrediction) return Selection::Auc;
  return data.attr_kind == AttrKind::Categorical ? Selection::Recall10 : Selection::Mse;
}

double selection_score(SatModel& m, const SatData& data, Selection sel, const Tensor& z_a) {
  if (sel == Selection::Auc) {
    if (!data.link) throw ConfigError("AUC selection needs a link split");
    const Tensor emb = edge_embeddings(m, z_a);
    std::vector<double> pos, neg;
    for (const auto& e : data.link->val_pos) pos.push_back(link_probability(emb, e.u, e.v));
    for (const auto& e : data.link->val_neg) neg.push_back(link_probability(emb, e.u, e.v));
    if (pos.empty() || neg.empty()) return 0.0;
    return eval::auc_ap(pos, neg).auc;
  }
  if (data.validation.empty()) return 0.0;
  Tape tape;
  const Tensor rows = gather_rows(tape.constant(z_a), data.validation).value();
  return completion_score(decode_attribute_values(m, rows, data.attr_kind), data, sel);
}

double completion_score(const Tensor& pred, const SatData& data, Selection sel) {
  if (data.validation.empty()) return 0.0;
  if (sel == Selection::Mse) return -eval::mean_squared_error(pred, data.x_val.dense);
  if (sel != Selection::Recall10) throw ConfigError("completion scoring needs recall@10 or mse selection");
  const std::size_t k = std::min<std::size_t>(10, data.n_attrs);
  const std::size_t ks[] = {k};
  const auto prof = eval::profile(pred, data.x_val.sparse, ks);
  return prof.evaluated ? prof.recall.at(k) : 0.0;
}

}  // namespace sat::model
