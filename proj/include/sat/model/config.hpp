#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace sat::model {

enum class Backbone { GCN, GAT };
enum class Task { Completion, LinkPrediction };
/// Validation criterion for picking the best epoch. Auto resolves to Recall@10 for
/// categorical completion, MSE for real-valued completion and AUC for link prediction.
enum class Selection { Auto, Recall10, Mse, Auc };

std::string to_string(Backbone b);
std::string to_string(Task t);
std::string to_string(Selection s);
Backbone parse_backbone(const std::string& s);
Task parse_task(const std::string& s);
Selection parse_selection(const std::string& s);

/// Which reconstruction and adversarial terms enter the generator objective.
struct LossTerms {
  bool self_x = true;
  bool self_a = true;
  bool cross_x = true;
  bool cross_a = true;
  bool adversarial = true;

  bool any_cross() const { return cross_x || cross_a; }
  bool needs_attribute_latents() const { return self_x || cross_a || adversarial; }
  bool operator==(const LossTerms&) const = default;
};

struct TrainConfig {
  double lambda_c = 10.0;
  double lr = 0.005;
  double dropout = 0.5;
  int max_epochs = 1000;
  int gen_steps = 2;
  int disc_steps = 1;
  std::uint64_t seed = 0;
  std::size_t hidden = 256;
  std::size_t latent = 64;
  std::size_t edge_dim = 64;
  Backbone backbone = Backbone::GCN;
  Task task = Task::Completion;
  Selection selection = Selection::Auto;
  LossTerms terms;
  bool saturating_generator = false;
  /// Cross-stream structure loss reconstructs observed rows against all N nodes; when
  /// false only the observed×observed block is used.
  bool cross_a_all_nodes = true;
  double gat_slope = 0.2;
  int mmd_every = 1;  // 0 disables the per-epoch MMD diagnostics
  std::size_t mmd_sample = 500;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

nlohmann::json to_json(const TrainConfig& c);
/// Missing keys keep their defaults; unknown keys are rejected.
TrainConfig train_config_from_json(const nlohmann::json& j, TrainConfig base = {});

}  // namespace sat::model
