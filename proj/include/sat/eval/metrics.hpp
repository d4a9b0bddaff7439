#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "sat/numerics/sparse.hpp"

namespace sat::eval {

using num::SparseMatrix;
using num::Tensor;

/// Indices of the k largest scores, ties broken by ascending index.
std::vector<std::size_t> top_k(std::span<const double> scores, std::size_t k);

/// |top-k ∩ truth| / |truth|. Throws std::invalid_argument on an empty truth set or k > F.
double recall_at_k(std::span<const double> scores, std::span<const std::size_t> truth, std::size_t k);

/// Binary-relevance NDCG with a log2(rank + 1) discount.
double ndcg_at_k(std::span<const double> scores, std::span<const std::size_t> truth, std::size_t k);

struct ProfilingResult {
  std::map<std::size_t, double> recall;  // k -> mean over evaluated nodes
  std::map<std::size_t, double> ndcg;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;  // nodes with an empty ground-truth set
};

/// Row i of `scores` is ranked against the nonzero columns of row i of `truth`.
ProfilingResult profile(const Tensor& scores, const SparseMatrix& truth, std::span<const std::size_t> ks);

struct AucAp {
  double auc = 0.0;
  double ap = 0.0;
};

/// AUC as the rank statistic with ties counted ½; AP with step interpolation over
/// descending score thresholds. Throws std::invalid_argument if either list is empty.
AucAp auc_ap(std::span<const double> pos, std::span<const double> neg);

struct MmdResult {
  double value = 0.0;      // clamped at zero
  double raw = 0.0;        // unbiased estimate, may be negative
  double bandwidth = 1.0;  // RBF sigma used
};

/// Unbiased squared MMD with RBF kernel exp(-d²/(2σ²)); σ is the median pairwise distance of
/// the pooled rows (1 when that median is 0). Needs at least two rows in each sample.
MmdResult mmd(const Tensor& a, const Tensor& b);

/// Mean squared error between two equally shaped tensors.
double mean_squared_error(const Tensor& a, const Tensor& b);

}  // namespace sat::eval
