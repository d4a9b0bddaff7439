#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "sat/numerics/sparse.hpp"
#include "sat/numerics/tape.hpp"

namespace sat::num {

using Rng = std::mt19937_64;

// Sparse operands passed to the ops below are treated as constants and must
// outlive the tape that records them.

// ---- dense linear algebra --------------------------------------------------
Var matmul(Var a, Var b);
/// a · bᵀ without materializing the transpose.
Var matmul_nt(Var a, Var b);
/// Sparse-dense product; gradient flows into `d` only.
Var spmm(const SparseMatrix& s, Var d);
Var transpose(Var a);

// ---- elementwise ----------------------------------------------------------
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
/// x (m×n) plus a bias row (1×n or n) broadcast over rows.
Var add_bias(Var x, Var bias);
Var scale(Var x, double factor);
Var relu(Var x);
Var leaky_relu(Var x, double slope);
Var sigmoid(Var x);
Var exp(Var x);
/// Throws std::domain_error on non-positive input.
Var log(Var x);
Var square(Var x);
/// log(1 + eˣ), evaluated stably.
Var softplus(Var x);

// ---- reductions and indexing ----------------------------------------------
Var sum(Var x);
Var mean(Var x);
/// Rows of x in the listed order (embedding lookup); backward scatter-adds.
Var gather_rows(Var x, std::span<const std::size_t> rows);

// ---- stochastic ------------------------------------------------------------
/// Inverted dropout. Identity when !training or rate == 0.
Var dropout(Var x, double rate, bool training, Rng& rng);

// ---- masked / edge-level ops (for attention) ------------------------------
/// Values of a dense n×m tensor at the pattern's coordinates (length nnz).
Var gather_pattern(Var dense, const SparseMatrix& pattern);
/// Dense tensor holding edge values at the pattern's coordinates, zero elsewhere.
Var scatter_pattern(Var edges, const SparseMatrix& pattern);
/// e_k = s[row_k] + t[col_k] for every stored coordinate k; s is rows×1, t is cols×1.
Var edge_scores(const SparseMatrix& pattern, Var s, Var t);
/// Softmax over the entries of each pattern row. Throws if a row is empty.
Var edge_softmax(const SparseMatrix& pattern, Var edges);
/// (pattern with `edges` as values) · d; gradient flows into both edges and d.
Var sparse_matmul(const SparseMatrix& pattern, Var edges, Var d);
/// Row-wise softmax of dense logits restricted to the mask; zeros off the mask.
Var softmax_rows_masked(Var logits, const SparseMatrix& mask);

// ---- losses (scalar outputs) ----------------------------------------------
/// Mean over all entries of weighted binary cross-entropy on logits. Entries
/// stored in `positives` have target 1 (weighted by pos_weight), all others 0.
Var weighted_bce_logits(Var logits, const SparseMatrix& positives, double pos_weight);
/// Mean squared error against a constant dense target.
Var mse(Var pred, const Tensor& target);
/// Mean softmax cross-entropy over the listed rows.
Var softmax_cross_entropy(Var logits, std::span<const int> labels,
                          std::span<const std::size_t> rows);

// ---- helpers used outside the tape ----------------------------------------
double sigmoid_scalar(double x);
double softplus_scalar(double x);
/// Plain dense product used by evaluation paths and tests.
Tensor matmul_values(const Tensor& a, const Tensor& b);

}  // namespace sat::num
