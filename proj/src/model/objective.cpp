#include "sat/model/objective.hpp"

#include "sat/errors.hpp"

namespace sat::model {

using namespace num;

namespace {

double value_or_zero(const Var& v) { return v.valid() ? v.item() : 0.0; }

Var accumulate(Var acc, Var term) { return acc.valid() ? add(acc, term) : term; }

}  // namespace

LossBreakdown GeneratorTerms::values() const {
  LossBreakdown b;
  b.self_x = value_or_zero(self_x);
  b.self_a = value_or_zero(self_a);
  b.cross_x = value_or_zero(cross_x);
  b.cross_a = value_or_zero(cross_a);
  b.gen_adv = value_or_zero(gen_adv);
  b.total = value_or_zero(total);
  return b;
}

Var attribute_loss(Var logits, const graph::AttributeView& target, AttrKind kind, double pos_weight) {
  if (kind == AttrKind::Categorical) return weighted_bce_logits(logits, target.sparse, pos_weight);
  return mse(logits, target.dense);
}

Var generator_adversarial_loss(Var logits_x, Var logits_a, bool saturating) {
  if (saturating) {
    // log(1 − σ(ℓ)) = −softplus(ℓ)
    return scale(add(mean(softplus(logits_x)), mean(softplus(logits_a))), -1.0);
  }
  return add(mean(softplus(scale(logits_x, -1.0))), mean(softplus(scale(logits_a, -1.0))));
}

Var discriminator_loss(Var prior_logits_x, Var prior_logits_a, Var logits_x, Var logits_a) {
  // −log σ(ℓ) = softplus(−ℓ), −log(1 − σ(ℓ)) = softplus(ℓ)
  Var real = add(mean(softplus(scale(prior_logits_x, -1.0))), mean(softplus(scale(prior_logits_a, -1.0))));
  Var fake = add(mean(softplus(logits_x)), mean(softplus(logits_a)));
  return add(real, fake);
}

GeneratorTerms generator_objective(SatModel& m, const SatData& data, const TrainConfig& cfg, ForwardContext& ctx) {
  const LossTerms& on = cfg.terms;
  GeneratorTerms t;
  t.z_a = m.encode_structure(ctx, data.a_hat, data.a_self);
  if (on.needs_attribute_latents()) t.z_x = m.encode_attributes(ctx, data.x_obs.sparse);

  Var edge_a;  // D_A embedding of every structure latent, shared by both structure terms
  if (on.self_a || (on.cross_a && cfg.cross_a_all_nodes)) edge_a = m.structure_embedding(ctx, t.z_a);
  Var z_a_obs;
  if (on.cross_x || (on.cross_a && !cfg.cross_a_all_nodes)) z_a_obs = gather_rows(t.z_a, data.observed);

  Var self, cross;
  if (on.self_x) {
    t.self_x = attribute_loss(m.decode_attributes(ctx, t.z_x), data.x_obs, data.attr_kind, data.pos_weight_x);
    self = accumulate(self, t.self_x);
  }
  if (on.self_a) {
    t.self_a = weighted_bce_logits(matmul_nt(edge_a, edge_a), data.a_self, data.pos_weight_a);
    self = accumulate(self, t.self_a);
  }
  if (on.cross_x) {
    t.cross_x = attribute_loss(m.decode_attributes(ctx, z_a_obs), data.x_obs, data.attr_kind, data.pos_weight_x);
    cross = accumulate(cross, t.cross_x);
  }
  if (on.cross_a) {
    Var edge_x = m.structure_embedding(ctx, t.z_x);
    if (cfg.cross_a_all_nodes) {
      t.cross_a = weighted_bce_logits(matmul_nt(edge_x, edge_a), data.a_obs_rows, data.pos_weight_cross_a);
    } else {
      Var edge_ao = m.structure_embedding(ctx, z_a_obs);
      t.cross_a = weighted_bce_logits(matmul_nt(edge_x, edge_ao), data.a_obs_block, data.pos_weight_cross_a_block);
    }
    cross = accumulate(cross, t.cross_a);
  }
  Var total = self;
  if (cross.valid()) total = accumulate(total, scale(cross, cfg.lambda_c));
  if (on.adversarial) {
    t.gen_adv = generator_adversarial_loss(m.discriminate(ctx, t.z_x), m.discriminate(ctx, t.z_a),
                                           cfg.saturating_generator);
    total = add(total, t.gen_adv);
  }
  t.total = total;
  return t;
}

Var discriminator_objective(SatModel& m, const SatData& data, ForwardContext& ctx, const Tensor& prior_x,
                            const Tensor& prior_a) {
  Var z_x = m.encode_attributes(ctx, data.x_obs.sparse);
  Var z_a = m.encode_structure(ctx, data.a_hat, data.a_self);
  if (prior_x.shape() != z_x.shape() || prior_a.shape() != z_a.shape()) {
    throw ShapeError("discriminator_objective: prior draws must match the latent batch shapes");
  }
  return discriminator_loss(m.discriminate(ctx, ctx.tape.constant(prior_x)), m.discriminate(ctx, ctx.tape.constant(prior_a)),
                            m.discriminate(ctx, z_x), m.discriminate(ctx, z_a));
}

}  // namespace sat::model
