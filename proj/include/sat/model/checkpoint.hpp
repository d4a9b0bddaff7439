#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sat/model/sat_model.hpp"

namespace sat::model {

/// Named tensors plus a JSON header. The file is the magic "SATCKPT1", a little-endian
/// uint64 header length, the header, then each tensor's doubles in header order.
struct Checkpoint {
  std::string kind;
  nlohmann::json meta = nlohmann::json::object();
  int epoch = 0;
  double score = 0.0;
  std::vector<std::pair<std::string, Tensor>> tensors;

  const Tensor* find(const std::string& name) const;
};

void save_checkpoint(const Checkpoint& c, const std::filesystem::path& path);
/// Throws DataError on a truncated or malformed file.
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Snapshot of a SAT model with its dimensions and training config.
Checkpoint sat_checkpoint(const SatModel& m, const TrainConfig& cfg, int epoch, double score);

struct LoadedSat {
  std::unique_ptr<SatModel> model;
  TrainConfig config;
  int epoch = 0;
  double score = 0.0;
};

/// Rebuilds the model described by a "sat" checkpoint and loads its parameters.
LoadedSat sat_model_from_checkpoint(const Checkpoint& c);

}  // namespace sat::model
