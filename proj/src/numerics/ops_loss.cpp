#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "sat/errors.hpp"
#include "sat/numerics/ops.hpp"

namespace sat::num {

Var weighted_bce_logits(Var logits, const SparseMatrix& positives, double pos_weight) {
  const Tensor& lv = logits.value();
  if (lv.rank() != 2 || positives.rows() != lv.rows() || positives.cols() != lv.cols()) {
    throw ShapeError("weighted_bce_logits: target pattern does not match " + shape_string(lv.shape()));
  }
  if (lv.size() == 0) throw ShapeError("weighted_bce_logits: empty logits");
  const double inv_n = 1.0 / static_cast<double>(lv.size());
  // one exponential per entry gives both softplus(l) and σ(l); σ is kept for the backward pass
  auto sig = std::make_shared<std::vector<double>>(lv.size());
  double total = 0.0;
  for (std::size_t i = 0; i < lv.size(); ++i) {
    const double l = lv[i];
    const double e = std::exp(-std::abs(l));
    total += std::max(l, 0.0) + std::log1p(e);
    (*sig)[i] = l >= 0 ? 1.0 / (1.0 + e) : e / (1.0 + e);
  }
  const auto rows = positives.row_index();
  const auto cols = positives.col_index();
  for (std::size_t k = 0; k < positives.nnz(); ++k) {
    const double l = lv(rows[k], cols[k]);
    total += pos_weight * softplus_scalar(-l) - softplus_scalar(l);
  }
  const std::size_t id = logits.id();
  const SparseMatrix* p = &positives;
  return logits.tape().record(
      Tensor::scalar(total * inv_n), {logits}, [id, p, pos_weight, inv_n, sig](Tape& tape, const Tensor& g) {
        Tensor& gl = tape.grad_buffer(id);
        const double s = g[0] * inv_n;
        const std::vector<double>& sv = *sig;
        for (std::size_t i = 0; i < sv.size(); ++i) gl[i] += s * sv[i];
        const auto rows = p->row_index();
        const auto cols = p->col_index();
        const std::size_t width = gl.cols();
        for (std::size_t k = 0; k < p->nnz(); ++k) {
          const double sig_k = sv[rows[k] * width + cols[k]];
          // replace the negative-class term σ with the weighted positive term −w(1−σ)
          gl(rows[k], cols[k]) += s * (-pos_weight * (1.0 - sig_k) - sig_k);
        }
      });
}

Var mse(Var pred, const Tensor& target) {
  const Tensor& pv = pred.value();
  if (pv.shape() != target.shape()) {
    throw ShapeError("mse: " + shape_string(pv.shape()) + " vs target " + shape_string(target.shape()));
  }
  if (pv.size() == 0) throw ShapeError("mse: empty prediction");
  const double inv_n = 1.0 / static_cast<double>(pv.size());
  double total = 0.0;
  for (std::size_t i = 0; i < pv.size(); ++i) {
    const double d = pv[i] - target[i];
    total += d * d;
  }
  const std::size_t id = pred.id();
  return pred.tape().record(Tensor::scalar(total * inv_n), {pred},
                            [id, target, inv_n](Tape& tape, const Tensor& g) {
                              const Tensor& pv = tape.value(id);
                              Tensor& gp = tape.grad_buffer(id);
                              for (std::size_t i = 0; i < pv.size(); ++i) {
                                gp[i] += g[0] * 2.0 * (pv[i] - target[i]) * inv_n;
                              }
                            });
}

Var softmax_cross_entropy(Var logits, std::span<const int> labels, std::span<const std::size_t> rows) {
  const Tensor& lv = logits.value();
  if (lv.rank() != 2 || labels.size() != lv.rows()) {
    throw ShapeError("softmax_cross_entropy: labels do not align with " + shape_string(lv.shape()));
  }
  if (rows.empty()) throw ShapeError("softmax_cross_entropy: no rows selected");
  const std::size_t c = lv.cols();
  const double inv_n = 1.0 / static_cast<double>(rows.size());
  Tensor probs = Tensor::matrix(rows.size(), c);
  double total = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t r = rows[i];
    const int y = labels[r];
    if (y < 0 || static_cast<std::size_t>(y) >= c) throw std::out_of_range("label outside class range");
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < c; ++k) mx = std::max(mx, lv(r, k));
    double z = 0.0;
    for (std::size_t k = 0; k < c; ++k) {
      probs(i, k) = std::exp(lv(r, k) - mx);
      z += probs(i, k);
    }
    for (std::size_t k = 0; k < c; ++k) probs(i, k) /= z;
    total += -(lv(r, static_cast<std::size_t>(y)) - mx - std::log(z));
  }
  const std::size_t id = logits.id();
  std::vector<std::size_t> idx(rows.begin(), rows.end());
  std::vector<int> ys;
  ys.reserve(idx.size());
  for (std::size_t r : idx) ys.push_back(labels[r]);
  return logits.tape().record(
      Tensor::scalar(total * inv_n), {logits},
      [id, idx = std::move(idx), ys = std::move(ys), probs = std::move(probs), inv_n, c](
          Tape& tape, const Tensor& g) {
        Tensor& gl = tape.grad_buffer(id);
        for (std::size_t i = 0; i < idx.size(); ++i) {
          for (std::size_t k = 0; k < c; ++k) {
            const double onehot = static_cast<int>(k) == ys[i] ? 1.0 : 0.0;
            gl(idx[i], k) += g[0] * inv_n * (probs(i, k) - onehot);
          }
        }
      });
}

}  // namespace sat::num
