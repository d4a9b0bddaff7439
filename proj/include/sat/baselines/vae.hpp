#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "sat/model/checkpoint.hpp"
#include "sat/model/data.hpp"

namespace sat::baselines {

using num::Parameter;
using num::ParameterSet;
using num::Tape;
using num::Tensor;
using num::Var;

struct VaeConfig {
  std::size_t hidden = 256;
  std::size_t latent = 64;
  double lr = 0.005;
  double dropout = 0.0;
  int max_epochs = 1000;
  std::uint64_t seed = 0;

  void validate() const;
  bool operator==(const VaeConfig&) const = default;
};

nlohmann::json to_json(const VaeConfig& c);
VaeConfig vae_config_from_json(const nlohmann::json& j, VaeConfig base = {});

/// KL(𝒩(μ, σ²) ‖ 𝒩(0, I)) summed over latent dimensions, averaged over rows.
Var kl_standard_normal(Var mu, Var logvar);

/// Two-layer encoder to (μ, log σ²) and two-layer decoder, trained on observed attribute rows.
class Vae {
 public:
  Vae(std::size_t n_attrs, const VaeConfig& cfg);
  Vae(const Vae&) = delete;
  Vae& operator=(const Vae&) = delete;

  std::size_t n_attrs() const { return n_attrs_; }
  const VaeConfig& config() const { return cfg_; }
  ParameterSet& params() { return params_; }
  const ParameterSet& params() const { return params_; }

  struct Encoding {
    Var mu;
    Var logvar;
  };
  Encoding encode(Tape& tape, const num::SparseMatrix& x, bool training, num::Rng* rng);
  Var decode(Tape& tape, Var z);

  /// Posterior means of the given rows (no sampling).
  Tensor posterior_means(const num::SparseMatrix& x);
  /// Decoded attributes: probabilities for categorical data, raw values otherwise.
  Tensor decode_values(const Tensor& z, graph::AttrKind kind);

 private:
  Var layer(Tape& tape, Var x, Parameter* w, Parameter* b);

  std::size_t n_attrs_;
  VaeConfig cfg_;
  ParameterSet params_;
  Parameter* enc_w1_;
  Parameter* enc_b1_;
  Parameter* mu_w_;
  Parameter* mu_b_;
  Parameter* lv_w_;
  Parameter* lv_b_;
  Parameter* dec_w1_;
  Parameter* dec_b1_;
  Parameter* dec_w2_;
  Parameter* dec_b2_;
};

struct VaeEpoch {
  int epoch = 0;
  double recon = 0.0;
  double kl = 0.0;
  double total = 0.0;
  double val_score = 0.0;
};

struct VaeResult {
  int best_epoch = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  std::vector<VaeEpoch> curves;
};

/// ELBO training on X^o (reconstruction summed over attributes plus KL, per node). Keeps the
/// epoch whose latent-aggregated validation completion scores best. Throws DivergenceError.
VaeResult train_vae(Vae& vae, const model::SatData& data);

/// X̂ for target nodes: posterior means of observed one-hop neighbors (structure edges of
/// `data`), averaged and decoded. Targets without observed neighbors decode the zero code.
Tensor vae_latent_aggre(Vae& vae, const model::SatData& data, std::span<const std::size_t> targets);

model::Checkpoint vae_checkpoint(const Vae& vae, int epoch, double score);
std::unique_ptr<Vae> vae_from_checkpoint(const model::Checkpoint& c);

}  // namespace sat::baselines
