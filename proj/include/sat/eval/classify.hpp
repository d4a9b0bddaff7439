#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sat/numerics/sparse.hpp"

namespace sat::eval {

enum class Classifier { MLP, GCN };
/// X: node features only; A: graph only (identity features); AX: graph plus features.
enum class InputMode { X, A, AX };

std::string to_string(Classifier c);
std::string to_string(InputMode m);

struct ClassifyOptions {
  std::size_t folds = 5;
  std::size_t repeats = 3;
  std::size_t hidden = 64;
  double lr = 0.005;
  double dropout = 0.5;
  int max_epochs = 300;
  int patience = 20;        // epochs without held-out improvement before stopping
  double holdout = 0.1;     // share of each training fold used for early stopping
  std::uint64_t seed = 0;
};

struct ClassificationResult {
  Classifier classifier = Classifier::MLP;
  InputMode mode = InputMode::X;
  double mean = 0.0;
  double sd = 0.0;                 // sample standard deviation over folds × repeats
  std::vector<double> accuracies;  // per fold, repeat-major
};

/// Stratified k-fold assignment of `nodes` by label, reshuffled per seed. Within a class
/// the fold sizes differ by at most one. Returns the fold index of each node.
std::vector<std::size_t> stratified_folds(std::span<const std::size_t> nodes, std::span<const int> labels,
                                          std::size_t folds, std::uint64_t seed);

/// Cross-validated accuracy over `nodes` (labels indexed by node id, all ≥ 0 for those nodes).
/// MLP uses mode X with features given per node (N × F). GCN uses `a_hat` (N × N) over all
/// nodes with `features` (mode AX) or a learned identity embedding (mode A).
/// Throws DataError on missing labels and ConfigError on an inconsistent request.
ClassificationResult classify_nodes(const num::Tensor* features, std::span<const int> labels,
                                    std::span<const std::size_t> nodes, Classifier classifier, InputMode mode,
                                    const num::SparseMatrix* a_hat, const ClassifyOptions& opt);

}  // namespace sat::eval
