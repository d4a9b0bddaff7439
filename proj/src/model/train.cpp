#include "sat/model/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "sat/errors.hpp"
#include "sat/eval/metrics.hpp"
#include "sat/model/inference.hpp"
#include "sat/numerics/adam.hpp"
#include "sat/numerics/init.hpp"

namespace sat::model {

using namespace num;

Rng derive_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), 0x5a7u};
  return Rng(seq);
}

std::unique_ptr<SatModel> make_model(const TrainConfig& cfg, const SatData& data) {
  const ModelDims dims{data.n_nodes, data.n_attrs, cfg.hidden, cfg.latent, cfg.edge_dim};
  return std::make_unique<SatModel>(dims, cfg.backbone, cfg.dropout, cfg.seed, cfg.gat_slope);
}

namespace {

constexpr std::uint64_t kTrainStream = 1;
constexpr std::uint64_t kDiagnosticStream = 2;

void check_finite(double v, const char* what, int epoch) {
  if (!std::isfinite(v)) throw DivergenceError(std::string("non-finite ") + what + " at epoch " + std::to_string(epoch), epoch);
}

// Sorted subsample of [0, n) with at most cap entries.
std::vector<std::size_t> subsample(std::size_t n, std::size_t cap, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (n > cap) {
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(cap);
    std::sort(idx.begin(), idx.end());
  }
  return idx;
}

Tensor rows_of(const Tensor& t, const std::vector<std::size_t>& rows) {
  Tensor out = Tensor::matrix(rows.size(), t.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) std::copy(t.row(rows[i]).begin(), t.row(rows[i]).end(), out.row(i).begin());
  return out;
}

Tensor stack(const Tensor& a, const Tensor& b) {
  Tensor out = Tensor::matrix(a.rows() + b.rows(), a.cols());
  std::copy(a.values().begin(), a.values().end(), out.values().begin());
  std::copy(b.values().begin(), b.values().end(), out.values().begin() + static_cast<long>(a.size()));
  return out;
}

}  // namespace

MmdProbe::MmdProbe(const SatData& data, const TrainConfig& cfg) {
  Rng rng = derive_rng(cfg.seed, kDiagnosticStream);
  train_rows_ = subsample(data.observed.size(), cfg.mmd_sample, rng);
  val_rows_ = subsample(data.validation.size(), cfg.mmd_sample, rng);
  prior_ = normal(2 * train_rows_.size(), cfg.latent, rng);
}

void MmdProbe::measure(SatModel& m, const SatData& data, const Tensor& z_a, EpochRecord& rec) const {
  if (train_rows_.size() >= 2) {
    const Tensor zx = rows_of(infer_attribute_latents(m, data.x_obs.sparse), train_rows_);
    std::vector<std::size_t> nodes;
    for (std::size_t r : train_rows_) nodes.push_back(data.observed[r]);
    const Tensor za = rows_of(z_a, nodes);
    rec.mmd_train = eval::mmd(zx, za).value;
    rec.mmd_prior = eval::mmd(stack(zx, za), prior_).value;
  }
  if (val_rows_.size() >= 2) {
    const Tensor zx = rows_of(infer_attribute_latents(m, data.x_val.sparse), val_rows_);
    std::vector<std::size_t> nodes;
    for (std::size_t r : val_rows_) nodes.push_back(data.validation[r]);
    rec.mmd_val = eval::mmd(zx, rows_of(z_a, nodes)).value;
  }
}

TrainResult train(SatModel& m, const SatData& data, const TrainConfig& cfg, const EpochCallback& on_epoch) {
  cfg.validate();
  if (m.dims().n_nodes != data.n_nodes || m.dims().n_attrs != data.n_attrs) {
    throw ConfigError("model dimensions do not match the dataset");
  }
  if (cfg.task != data.task) throw ConfigError("training config task does not match the prepared data");
  TrainResult res;
  res.selection = resolve_selection(cfg, data);

  Rng rng = derive_rng(cfg.seed, kTrainStream);
  Adam gen_opt(m.generator_params(), cfg.lr);
  Adam disc_opt(m.discriminator_params(), cfg.lr);
  const MmdProbe diag(data, cfg);
  std::vector<Tensor> best = m.params().snapshot();

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    EpochRecord rec;
    rec.epoch = epoch;
    for (int s = 0; s < cfg.gen_steps; ++s) {
      m.params().zero_grad();
      Tape tape;
      ForwardContext ctx{tape, true, &rng, true, false};
      GeneratorTerms terms = generator_objective(m, data, cfg, ctx);
      rec.loss = terms.values();
      check_finite(rec.loss.total, "generator loss", epoch);
      tape.backward(terms.total);
      gen_opt.step();
      ++res.gen_updates;
    }
    if (cfg.terms.adversarial) {
      for (int s = 0; s < cfg.disc_steps; ++s) {
        m.params().zero_grad();
        const Tensor prior_x = normal(data.observed.size(), cfg.latent, rng);
        const Tensor prior_a = normal(data.n_nodes, cfg.latent, rng);
        Tape tape;
        ForwardContext ctx{tape, true, &rng, false, true};
        Var loss = discriminator_objective(m, data, ctx, prior_x, prior_a);
        rec.loss.disc_adv = loss.item();
        check_finite(rec.loss.disc_adv, "discriminator loss", epoch);
        tape.backward(loss);
        disc_opt.step();
        ++res.disc_updates;
      }
    }
    m.params().zero_grad();

    const Tensor z_a = infer_structure_latents(m, data);
    rec.val_score = selection_score(m, data, res.selection, z_a);
    check_finite(rec.val_score, "validation score", epoch);
    if (cfg.mmd_every > 0 && (epoch == 1 || epoch % cfg.mmd_every == 0)) diag.measure(m, data, z_a, rec);
    if (rec.val_score > res.best_score) {
      res.best_score = rec.val_score;
      res.best_epoch = epoch;
      best = m.params().snapshot();
    }
    res.curves.push_back(rec);
    if (on_epoch) on_epoch(rec);
  }
  m.params().restore(best);
  return res;
}

void write_curves_csv(const std::vector<EpochRecord>& curves, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "epoch,self_x,self_a,cross_x,cross_a,gen_adv,disc_adv,total,val_score,mmd_train,mmd_val,mmd_prior\n";
  auto num = [&](double v) {
    if (std::isnan(v)) return std::string();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return std::string(buf);
  };
  for (const EpochRecord& r : curves) {
    out << r.epoch << ',' << num(r.loss.self_x) << ',' << num(r.loss.self_a) << ',' << num(r.loss.cross_x) << ','
        << num(r.loss.cross_a) << ',' << num(r.loss.gen_adv) << ',' << num(r.loss.disc_adv) << ','
        << num(r.loss.total) << ',' << num(r.val_score) << ',' << num(r.mmd_train) << ',' << num(r.mmd_val) << ','
        << num(r.mmd_prior) << '\n';
  }
}

}  // namespace sat::model
