#include "sat/baselines/vae.hpp"

#include <cmath>

#include "sat/baselines/baselines.hpp"
#include "sat/errors.hpp"
#include "sat/model/inference.hpp"
#include "sat/model/objective.hpp"
#include "sat/model/train.hpp"
#include "sat/numerics/adam.hpp"
#include "sat/numerics/init.hpp"

namespace sat::baselines {

using namespace num;

void VaeConfig::validate() const {
  if (hidden == 0 || latent == 0) throw ConfigError("vae widths must be positive");
  if (!(lr > 0.0)) throw ConfigError("learning rate must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout must lie in [0, 1)");
  if (max_epochs < 1) throw ConfigError("max_epochs must be at least 1");
}

nlohmann::json to_json(const VaeConfig& c) {
  return {{"hidden", c.hidden}, {"latent", c.latent}, {"lr", c.lr},
          {"dropout", c.dropout}, {"max_epochs", c.max_epochs}, {"seed", c.seed}};
}

VaeConfig vae_config_from_json(const nlohmann::json& j, VaeConfig c) {
  if (!j.is_object()) throw ConfigError("vae config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "hidden") c.hidden = v.get<std::size_t>();
      else if (key == "latent") c.latent = v.get<std::size_t>();
      else if (key == "lr") c.lr = v.get<double>();
      else if (key == "dropout") c.dropout = v.get<double>();
      else if (key == "max_epochs") c.max_epochs = v.get<int>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else throw ConfigError("unknown vae config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("vae config: ") + e.what());
  }
  c.validate();
  return c;
}

Var kl_standard_normal(Var mu, Var logvar) {
  Tape& tape = mu.tape();
  const double rows = static_cast<double>(mu.value().rows());
  const double count = static_cast<double>(mu.value().size());
  // −½ Σ (1 + log σ² − μ² − σ²)
  Var inner = sub(sub(sum(logvar), sum(square(mu))), sum(exp(logvar)));
  return scale(add(inner, tape.constant(Tensor::scalar(count))), -0.5 / rows);
}

Vae::Vae(std::size_t n_attrs, const VaeConfig& cfg) : n_attrs_(n_attrs), cfg_(cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const std::size_t h = cfg.hidden, d = cfg.latent;
  enc_w1_ = &params_.add("enc.w1", glorot_uniform(n_attrs, h, rng));
  enc_b1_ = &params_.add("enc.b1", Tensor::matrix(1, h));
  mu_w_ = &params_.add("enc.mu_w", glorot_uniform(h, d, rng));
  mu_b_ = &params_.add("enc.mu_b", Tensor::matrix(1, d));
  lv_w_ = &params_.add("enc.logvar_w", glorot_uniform(h, d, rng));
  lv_b_ = &params_.add("enc.logvar_b", Tensor::matrix(1, d));
  dec_w1_ = &params_.add("dec.w1", glorot_uniform(d, h, rng));
  dec_b1_ = &params_.add("dec.b1", Tensor::matrix(1, h));
  dec_w2_ = &params_.add("dec.w2", glorot_uniform(h, n_attrs, rng));
  dec_b2_ = &params_.add("dec.b2", Tensor::matrix(1, n_attrs));
}

Var Vae::layer(Tape& tape, Var x, Parameter* w, Parameter* b) {
  return add_bias(matmul(x, tape.parameter(*w)), tape.parameter(*b));
}

Vae::Encoding Vae::encode(Tape& tape, const SparseMatrix& x, bool training, Rng* rng) {
  Var h = relu(add_bias(spmm(x, tape.parameter(*enc_w1_)), tape.parameter(*enc_b1_)));
  if (training && cfg_.dropout > 0.0) h = dropout(h, cfg_.dropout, true, *rng);
  return {layer(tape, h, mu_w_, mu_b_), layer(tape, h, lv_w_, lv_b_)};
}

Var Vae::decode(Tape& tape, Var z) { return layer(tape, relu(layer(tape, z, dec_w1_, dec_b1_)), dec_w2_, dec_b2_); }

Tensor Vae::posterior_means(const SparseMatrix& x) {
  Tape tape;
  return encode(tape, x, false, nullptr).mu.value();
}

Tensor Vae::decode_values(const Tensor& z, graph::AttrKind kind) {
  Tape tape;
  Tensor out = decode(tape, tape.constant(z)).value();
  if (kind == graph::AttrKind::Categorical) {
    for (double& v : out.values()) v = sigmoid_scalar(v);
  }
  return out;
}

VaeResult train_vae(Vae& vae, const model::SatData& data) {
  if (vae.n_attrs() != data.n_attrs) throw ConfigError("vae width does not match the dataset");
  const VaeConfig& cfg = vae.config();
  const auto sel = data.attr_kind == graph::AttrKind::Categorical ? model::Selection::Recall10 : model::Selection::Mse;
  Rng rng = model::derive_rng(cfg.seed, 1);
  std::vector<Parameter*> all;
  for (Parameter& p : vae.params()) all.push_back(&p);
  Adam opt(all, cfg.lr);
  const double f = static_cast<double>(data.n_attrs);
  VaeResult res;
  std::vector<Tensor> best = vae.params().snapshot();

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    vae.params().zero_grad();
    Tape tape;
    const auto enc = vae.encode(tape, data.x_obs.sparse, true, &rng);
    const Tensor eps = normal(enc.mu.value().rows(), cfg.latent, rng);
    Var z = add(enc.mu, mul(exp(scale(enc.logvar, 0.5)), tape.constant(eps)));
    // per-node ELBO: the entry-averaged attribute loss times F is the per-row sum
    Var recon = scale(model::attribute_loss(vae.decode(tape, z), data.x_obs, data.attr_kind, data.pos_weight_x), f);
    Var kl = kl_standard_normal(enc.mu, enc.logvar);
    Var total = add(recon, kl);
    VaeEpoch rec{epoch, recon.item(), kl.item(), total.item(), 0.0};
    if (!std::isfinite(rec.total)) {
      throw DivergenceError("non-finite vae loss at epoch " + std::to_string(epoch), epoch);
    }
    tape.backward(total);
    opt.step();

    rec.val_score = model::completion_score(vae_latent_aggre(vae, data, data.validation), data, sel);
    if (rec.val_score > res.best_score) {
      res.best_score = rec.val_score;
      res.best_epoch = epoch;
      best = vae.params().snapshot();
    }
    res.curves.push_back(rec);
  }
  vae.params().zero_grad();
  vae.params().restore(best);
  return res;
}

Tensor vae_latent_aggre(Vae& vae, const model::SatData& data, std::span<const std::size_t> targets) {
  const Tensor mu = vae.posterior_means(data.x_obs.sparse);
  const Tensor z = neighbor_mean(mu, data.x_obs.row_of, graph::adjacency_lists(data.n_nodes, data.structure_edges),
                                 targets);
  return vae.decode_values(z, data.attr_kind);
}

model::Checkpoint vae_checkpoint(const Vae& vae, int epoch, double score) {
  model::Checkpoint c;
  c.kind = "vae";
  c.meta = {{"config", to_json(vae.config())}, {"n_attrs", vae.n_attrs()}};
  c.epoch = epoch;
  c.score = score;
  for (const Parameter& p : vae.params()) c.tensors.emplace_back(p.name, p.value);
  return c;
}

std::unique_ptr<Vae> vae_from_checkpoint(const model::Checkpoint& c) {
  if (c.kind != "vae") throw DataError("checkpoint holds a '" + c.kind + "' model, expected 'vae'");
  std::unique_ptr<Vae> vae;
  try {
    vae = std::make_unique<Vae>(c.meta.at("n_attrs").get<std::size_t>(), vae_config_from_json(c.meta.at("config")));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("checkpoint metadata: ") + e.what());
  }
  for (Parameter& p : vae->params()) {
    const Tensor* t = c.find(p.name);
    if (!t || t->shape() != p.value.shape()) throw DataError("checkpoint lacks a matching tensor for " + p.name);
    p.value = *t;
  }
  return vae;
}

}  // namespace sat::baselines
