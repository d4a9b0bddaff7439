#pragma once

#include <filesystem>
#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "sat/model/objective.hpp"

namespace sat::model {

struct EpochRecord {
  int epoch = 0;  // 1-based
  LossBreakdown loss;
  double val_score = 0.0;
  // NaN when diagnostics were skipped for the epoch
  double mmd_train = std::numeric_limits<double>::quiet_NaN();  // z_x vs z_a of observed nodes
  double mmd_val = std::numeric_limits<double>::quiet_NaN();    // same for validation nodes
  double mmd_prior = std::numeric_limits<double>::quiet_NaN();  // pooled latents vs a fixed prior draw
};

struct TrainResult {
  int best_epoch = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  Selection selection = Selection::Auto;
  std::vector<EpochRecord> curves;
  long gen_updates = 0;
  long disc_updates = 0;
};

/// Per-epoch latent diagnostics on a fixed subsample of observed and validation nodes
/// and a fixed prior draw, all derived from cfg.seed independently of training draws.
class MmdProbe {
 public:
  MmdProbe(const SatData& data, const TrainConfig& cfg);
  /// Fills the three mmd_* fields of `rec` for the current parameters; z_a are the
  /// inference-mode structure latents.
  void measure(SatModel& m, const SatData& data, const Tensor& z_a, EpochRecord& rec) const;

 private:
  std::vector<std::size_t> train_rows_;  // positions within data.observed
  std::vector<std::size_t> val_rows_;    // positions within data.validation
  Tensor prior_;
};

/// Model sized for the dataset with the config's widths, backbone and seed.
std::unique_ptr<SatModel> make_model(const TrainConfig& cfg, const SatData& data);

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Adversarial training. Each epoch runs gen_steps generator updates (fresh forward each)
/// then disc_steps discriminator updates, and scores the validation criterion. On return the
/// model holds the best-scoring parameters. Throws DivergenceError with the epoch index on a
/// non-finite loss.
TrainResult train(SatModel& m, const SatData& data, const TrainConfig& cfg, const EpochCallback& on_epoch = {});

/// One row per epoch: losses, validation score and MMD diagnostics.
void write_curves_csv(const std::vector<EpochRecord>& curves, const std::filesystem::path& path);

/// Independent stream of a seed, so that init, dropout and diagnostics never share draws.
num::Rng derive_rng(std::uint64_t seed, std::uint64_t stream);

}  // namespace sat::model
