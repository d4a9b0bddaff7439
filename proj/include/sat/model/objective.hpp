#pragma once

#include "sat/model/data.hpp"
#include "sat/model/sat_model.hpp"

namespace sat::model {

/// Scalar values of each loss term for one step (zero when a term is disabled).
struct LossBreakdown {
  double self_x = 0.0;
  double self_a = 0.0;
  double cross_x = 0.0;
  double cross_a = 0.0;
  double gen_adv = 0.0;
  double disc_adv = 0.0;
  /// self_x + self_a + λ_c·(cross_x + cross_a) + gen_adv
  double total = 0.0;
};

/// Tape handles of one generator-side forward pass. Disabled terms hold invalid Vars.
struct GeneratorTerms {
  Var z_x;  // latents of observed nodes from attributes
  Var z_a;  // latents of all nodes from structure
  Var self_x, self_a, cross_x, cross_a, gen_adv;
  Var total;

  LossBreakdown values() const;
};

/// Weighted BCE on logits for categorical targets, MSE for real-valued ones.
Var attribute_loss(Var logits, const graph::AttributeView& target, AttrKind kind, double pos_weight);

/// Generator loss on discriminator logits: non-saturating −log σ(ℓ) by default,
/// log(1 − σ(ℓ)) when saturating.
Var generator_adversarial_loss(Var logits_x, Var logits_a, bool saturating);

/// Four mean BCE terms: prior batches as real (once per latent source), latents as fake.
Var discriminator_loss(Var prior_logits_x, Var prior_logits_a, Var logits_x, Var logits_a);

/// Reconstruction (self + λ_c·cross) plus the generator adversarial term.
GeneratorTerms generator_objective(SatModel& m, const SatData& data, const TrainConfig& cfg, ForwardContext& ctx);

/// Fresh latents (encoders frozen by ctx) scored against prior draws shaped like each batch.
Var discriminator_objective(SatModel& m, const SatData& data, ForwardContext& ctx, const Tensor& prior_x,
                            const Tensor& prior_a);

}  // namespace sat::model
