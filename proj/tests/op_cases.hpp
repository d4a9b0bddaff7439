#pragma once

// Random operands and the table of differentiable ops shared by unit and acceptance tests.

#include <functional>
#include <random>
#include <vector>

#include "sat/numerics/ops.hpp"

namespace optable {

using namespace sat::num;

inline Tensor random_tensor(std::size_t r, std::size_t c, Rng& rng, double lo = -2.0, double hi = 2.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  Tensor t = Tensor::matrix(r, c);
  for (double& v : t.values()) v = d(rng);
  return t;
}

inline SparseMatrix random_sparse(std::size_t r, std::size_t c, double density, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<SparseEntry> e;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (u(rng) < density) e.push_back({i, j, u(rng) * 4.0 - 2.0});
  return SparseMatrix(r, c, std::move(e));
}

// pattern with at least one entry per row (diagonal plus random extras)
inline SparseMatrix random_mask(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<SparseEntry> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i == j || u(rng) < 0.4) e.push_back({i, j, 1.0});
  return SparseMatrix(n, n, std::move(e));
}

// Every differentiable op, ten random instances each.
struct OpCase {
  const char* name;
  std::size_t rows;
  std::size_t cols;
  std::function<Var(Tape&, Var)> f;
  double lo = -2.0;
  double hi = 2.0;
};

inline std::vector<OpCase> op_cases() {
  static Rng aux(99);
  static const Tensor b34 = random_tensor(3, 4, aux);
  static const Tensor b54 = random_tensor(5, 4, aux);
  static const Tensor bias = random_tensor(1, 4, aux);
  static const SparseMatrix sp = random_sparse(3, 3, 0.5, aux);
  static const SparseMatrix mask = random_mask(3, aux);
  static const SparseMatrix mask_rect = random_sparse(3, 4, 0.6, aux);
  static const Tensor w34 = random_tensor(3, 4, aux);
  static const Tensor w33 = random_tensor(3, 3, aux);
  static const Tensor target = random_tensor(3, 4, aux);
  static const std::vector<std::size_t> gather_idx{2, 0, 2, 1};
  static const std::vector<int> labels{1, 3, 0};
  static const std::vector<std::size_t> ce_rows{0, 2};
  auto w = [](Tape& t, Var y) { return sum(mul(y, t.constant(y.rows() == 3 && y.cols() == 3 ? w33 : w34))); };
  // column c of a 3×2 input as a 3×1 tensor
  auto col = [](Var x, std::size_t c) {
    return transpose(gather_rows(transpose(x), std::vector<std::size_t>{c}));
  };
  return {
      {"matmul_lhs", 3, 4, [](Tape& t, Var x) { return sum(square(matmul(x, t.constant(transpose(t.constant(b54)).value())))); }},
      {"matmul_rhs", 4, 2, [](Tape& t, Var x) { return sum(square(matmul(t.constant(b34), x))); }},
      {"matmul_nt_lhs", 3, 4, [](Tape& t, Var x) { return sum(square(matmul_nt(x, t.constant(b54)))); }},
      {"matmul_nt_rhs", 2, 4, [](Tape& t, Var x) { return sum(square(matmul_nt(t.constant(b54), x))); }},
      {"spmm", 3, 2, [](Tape&, Var x) { return sum(square(spmm(sp, x))); }},
      {"transpose", 3, 4, [](Tape& t, Var x) { return sum(mul(transpose(x), t.constant(transpose(t.constant(w34)).value()))); }},
      {"add", 3, 4, [w](Tape& t, Var x) { return w(t, add(x, square(x))); }},
      {"sub", 3, 4, [w](Tape& t, Var x) { return w(t, sub(square(x), x)); }},
      {"mul", 3, 4, [w](Tape& t, Var x) { return w(t, mul(x, x)); }},
      {"add_bias_x", 3, 4, [w](Tape& t, Var x) { return w(t, add_bias(square(x), t.constant(bias))); }},
      {"add_bias_b", 1, 4, [](Tape& t, Var x) { return sum(square(add_bias(t.constant(w34), x))); }},
      {"scale", 3, 4, [w](Tape& t, Var x) { return w(t, scale(x, -3.5)); }},
      {"relu", 3, 4, [w](Tape& t, Var x) { return w(t, relu(x)); }},
      {"leaky_relu", 3, 4, [w](Tape& t, Var x) { return w(t, leaky_relu(x, 0.2)); }},
      {"sigmoid", 3, 4, [w](Tape& t, Var x) { return w(t, sigmoid(x)); }},
      {"exp", 3, 4, [w](Tape& t, Var x) { return w(t, exp(x)); }},
      {"log", 3, 4, [w](Tape& t, Var x) { return w(t, log(x)); }, 0.2, 3.0},
      {"square", 3, 4, [w](Tape& t, Var x) { return w(t, square(x)); }},
      {"softplus", 3, 4, [w](Tape& t, Var x) { return w(t, softplus(x)); }},
      {"sum", 3, 4, [](Tape&, Var x) { return sum(x); }},
      {"mean", 3, 4, [](Tape&, Var x) { return mean(square(x)); }},
      {"gather_rows", 3, 4, [](Tape&, Var x) { return sum(square(gather_rows(x, gather_idx))); }},
      {"dropout", 3, 4, [w](Tape& t, Var x) {
         Rng r(5);
         return w(t, dropout(x, 0.5, true, r));
       }},
      {"gather_pattern", 3, 4, [](Tape&, Var x) { return sum(square(gather_pattern(x, mask_rect))); }},
      {"scatter_pattern", 3, 4, [w](Tape& t, Var x) {
         return w(t, scatter_pattern(gather_pattern(square(x), mask_rect), mask_rect));
       }},
      {"edge_scores", 3, 2, [col](Tape&, Var x) {
         return sum(square(edge_scores(mask, col(x, 0), col(x, 1))));
       }},
      {"edge_softmax", 3, 3, [](Tape& t, Var x) {
         Var a = edge_softmax(mask, gather_pattern(x, mask));
         return sum(mul(a, gather_pattern(t.constant(w33), mask)));
       }},
      {"sparse_matmul_edges", 3, 3, [](Tape& t, Var x) {
         return sum(square(sparse_matmul(mask, gather_pattern(x, mask), t.constant(b34))));
       }},
      {"sparse_matmul_dense", 3, 4, [](Tape& t, Var x) {
         Var e = gather_pattern(t.constant(w33), mask);
         return sum(square(sparse_matmul(mask, e, x)));
       }},
      {"softmax_rows_masked", 3, 3, [](Tape& t, Var x) {
         return sum(mul(softmax_rows_masked(x, mask), t.constant(w33)));
       }},
      {"weighted_bce_logits", 3, 4, [](Tape&, Var x) { return weighted_bce_logits(x, mask_rect, 3.0); }},
      {"mse", 3, 4, [](Tape&, Var x) { return mse(x, target); }},
      {"softmax_cross_entropy", 3, 4, [](Tape&, Var x) { return softmax_cross_entropy(x, labels, ce_rows); }},
  };
}

}  // namespace optable
