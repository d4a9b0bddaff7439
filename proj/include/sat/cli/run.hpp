#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sat/baselines/vae.hpp"
#include "sat/cli/methods.hpp"
#include "sat/eval/classify.hpp"
#include "sat/graph/split.hpp"
#include "sat/model/train.hpp"

namespace sat::cli {

namespace fs = std::filesystem;

struct DatasetSpec {
  std::string name;
  fs::path dir;  // absolute
  graph::AttrKind attr_kind = graph::AttrKind::Categorical;
};

/// Everything needed to reproduce one training run.
struct RunSpec {
  DatasetSpec dataset;
  Method method = Method::SatGcn;
  model::TrainConfig train;  // method terms/backbone applied; train.seed drives init and dropout
  baselines::VaeConfig vae;  // read by the vae method only
  std::uint64_t split_seed = 0;

  model::Task task() const { return train.task; }
};

nlohmann::json to_json(const RunSpec& s);
RunSpec run_spec_from_json(const nlohmann::json& j);

/// Applies the method's terms and backbone to `base`, sets the seed and λ_c (the dataset's
/// task default when absent) and mirrors widths, learning rate, epochs and seed into the VAE
/// settings. Validates method/task compatibility.
RunSpec resolve_run_spec(const DatasetSpec& dataset, Method method, model::TrainConfig base, std::uint64_t seed,
                         std::optional<double> lambda_c, std::uint64_t split_seed);

/// "<method>_lc<λ_c>_s<seed>"
std::string run_name(const RunSpec& s);

graph::AttributedGraph load_dataset(const DatasetSpec& d);

/// Node split (40/10/50 by default) and, for link prediction, a 60/20/20 link split, both
/// drawn from `seed`.
graph::SplitFile make_split(const graph::AttributedGraph& g, model::Task task, std::uint64_t seed,
                            std::array<double, 3> node_ratios = {0.4, 0.1, 0.5},
                            std::array<double, 3> link_ratios = {0.6, 0.2, 0.2});

/// A trained (or loaded) method together with its data.
struct TrainedRun {
  RunSpec spec;
  graph::AttributedGraph graph;
  graph::SplitFile split;
  model::SatData data;
  std::unique_ptr<model::SatModel> sat;
  std::unique_ptr<baselines::Vae> vae;
  nlohmann::json summary = nlohmann::json::object();
  std::vector<model::EpochRecord> curves;
  std::vector<baselines::VaeEpoch> vae_curves;
};

/// Trains the method of `spec`. Throws ConfigError on a method/task mismatch before any work.
TrainedRun train_run(const RunSpec& spec, graph::AttributedGraph g, graph::SplitFile split,
                     const model::EpochCallback& on_epoch = {});

/// Writes config.json, split.json, model.ckpt, curves.csv and summary.json into a new
/// directory. Throws ConfigError if `dir` already exists.
void save_run(const TrainedRun& run, const fs::path& dir);
TrainedRun load_run(const fs::path& dir);

/// Completed attributes for the listed nodes (probabilities for categorical data).
num::Tensor complete(TrainedRun& run, std::span<const std::size_t> nodes);

/// Latent codes of the listed nodes: "structure" (Z_A) or "attribute" (Z_X, observed nodes only).
num::Tensor latents(TrainedRun& run, const std::string& which, std::span<const std::size_t> nodes);

/// Link probabilities of node pairs; SAT variants only.
std::vector<double> link_scores(TrainedRun& run, std::span<const graph::Edge> pairs);

struct EvalSpec {
  bool profiling = true;
  bool classification = true;
  bool link = true;
  std::vector<std::size_t> ks;  // empty: dataset default
  eval::ClassifyOptions classify;
};

/// Metric report of a run. Deterministic for a given run and spec.
nlohmann::json evaluate_run(TrainedRun& run, const EvalSpec& spec);

}  // namespace sat::cli
