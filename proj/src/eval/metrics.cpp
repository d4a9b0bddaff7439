#include "sat/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sat/errors.hpp"

namespace sat::eval {

std::vector<std::size_t> top_k(std::span<const double> scores, std::size_t k) {
  if (k > scores.size()) {
    throw std::invalid_argument("k = " + std::to_string(k) + " exceeds " + std::to_string(scores.size()) +
                                " candidates");
  }
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::partial_sort(idx.begin(), idx.begin() + static_cast<long>(k), idx.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b] || (scores[a] == scores[b] && a < b);
  });
  idx.resize(k);
  return idx;
}

namespace {

std::vector<std::size_t> truth_set(std::span<const std::size_t> truth) {
  if (truth.empty()) throw std::invalid_argument("empty ground-truth set");
  std::vector<std::size_t> t(truth.begin(), truth.end());
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

double idcg(std::size_t hits) {
  double s = 0.0;
  for (std::size_t r = 1; r <= hits; ++r) s += 1.0 / std::log2(static_cast<double>(r) + 1.0);
  return s;
}

}  // namespace

double recall_at_k(std::span<const double> scores, std::span<const std::size_t> truth, std::size_t k) {
  const auto t = truth_set(truth);
  std::size_t hit = 0;
  for (std::size_t i : top_k(scores, k)) hit += std::binary_search(t.begin(), t.end(), i);
  return static_cast<double>(hit) / static_cast<double>(t.size());
}

double ndcg_at_k(std::span<const double> scores, std::span<const std::size_t> truth, std::size_t k) {
  const auto t = truth_set(truth);
  const auto top = top_k(scores, k);
  double dcg = 0.0;
  for (std::size_t r = 0; r < top.size(); ++r) {
    if (std::binary_search(t.begin(), t.end(), top[r])) dcg += 1.0 / std::log2(static_cast<double>(r) + 2.0);
  }
  return dcg / idcg(std::min(k, t.size()));
}

ProfilingResult profile(const Tensor& scores, const SparseMatrix& truth, std::span<const std::size_t> ks) {
  if (scores.rows() != truth.rows() || scores.cols() != truth.cols()) {
    throw ShapeError("profile: score matrix and truth matrix differ in shape");
  }
  ProfilingResult res;
  if (ks.empty()) return res;
  const std::size_t kmax = *std::max_element(ks.begin(), ks.end());
  for (std::size_t k : ks) {
    res.recall[k] = 0.0;
    res.ndcg[k] = 0.0;
  }
  for (std::size_t r = 0; r < truth.rows(); ++r) {
    std::vector<std::size_t> t;
    for (std::size_t p = truth.row_begin(r); p < truth.row_end(r); ++p) {
      if (truth.values()[p] != 0.0) t.push_back(truth.col_index()[p]);
    }
    if (t.empty()) {
      ++res.skipped;
      continue;
    }
    ++res.evaluated;
    const auto top = top_k(scores.row(r), kmax);
    for (std::size_t k : ks) {
      std::size_t hit = 0;
      double dcg = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        if (std::binary_search(t.begin(), t.end(), top[i])) {
          ++hit;
          dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
        }
      }
      res.recall[k] += static_cast<double>(hit) / static_cast<double>(t.size());
      res.ndcg[k] += dcg / idcg(std::min(k, t.size()));
    }
  }
  if (res.evaluated > 0) {
    for (std::size_t k : ks) {
      res.recall[k] /= static_cast<double>(res.evaluated);
      res.ndcg[k] /= static_cast<double>(res.evaluated);
    }
  }
  return res;
}

AucAp auc_ap(std::span<const double> pos, std::span<const double> neg) {
  if (pos.empty() || neg.empty()) throw std::invalid_argument("auc_ap: positive and negative lists must be nonempty");
  struct Item {
    double s;
    bool positive;
  };
  std::vector<Item> items;
  items.reserve(pos.size() + neg.size());
  for (double s : pos) items.push_back({s, true});
  for (double s : neg) items.push_back({s, false});
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.s > b.s; });

  const double np = static_cast<double>(pos.size());
  const double nn = static_cast<double>(neg.size());
  AucAp out;
  double neg_above = 0.0;  // negatives strictly above the current tie group
  double tp = 0.0, seen = 0.0;
  long double ap = 0.0L;  // extended precision so the result is rounded once
  for (std::size_t i = 0; i < items.size();) {
    std::size_t j = i;
    double gp = 0.0, gn = 0.0;
    while (j < items.size() && items[j].s == items[i].s) {
      (items[j].positive ? gp : gn) += 1.0;
      ++j;
    }
    // each positive beats negatives below it and ties half of its group's negatives
    out.auc += gp * (nn - neg_above - gn) + 0.5 * gp * gn;
    neg_above += gn;
    tp += gp;
    seen += gp + gn;
    // every positive of the group sits at precision tp / seen
    if (gp > 0.0) ap += static_cast<long double>(gp) * tp / seen;
    i = j;
  }
  out.auc /= np * nn;
  out.ap = static_cast<double>(ap / np);
  return out;
}

MmdResult mmd(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.cols() != b.cols()) throw ShapeError("mmd: samples differ in dimension");
  const std::size_t n = a.rows(), m = b.rows(), d = a.cols();
  if (n < 2 || m < 2) throw std::invalid_argument("mmd: each sample needs at least two rows");
  const std::size_t total = n + m;
  auto row = [&](std::size_t i) { return i < n ? a.data() + i * d : b.data() + (i - n) * d; };
  std::vector<double> sq(total * (total - 1) / 2);
  std::size_t p = 0;
  for (std::size_t i = 0; i < total; ++i) {
    const double* x = row(i);
    for (std::size_t j = i + 1; j < total; ++j) {
      const double* y = row(j);
      double s = 0.0;
      for (std::size_t c = 0; c < d; ++c) s += (x[c] - y[c]) * (x[c] - y[c]);
      sq[p++] = s;
    }
  }
  std::vector<double> tmp = sq;
  const std::size_t mid = tmp.size() / 2;
  std::nth_element(tmp.begin(), tmp.begin() + static_cast<long>(mid), tmp.end());
  double median_sq = tmp[mid];
  if (tmp.size() % 2 == 0) {
    const double lower = *std::max_element(tmp.begin(), tmp.begin() + static_cast<long>(mid));
    median_sq = 0.5 * (std::sqrt(lower) + std::sqrt(median_sq));
    median_sq *= median_sq;
  }
  MmdResult res;
  res.bandwidth = median_sq > 0.0 ? std::sqrt(median_sq) : 1.0;
  const double inv = 1.0 / (2.0 * res.bandwidth * res.bandwidth);
  double kxx = 0.0, kyy = 0.0, kxy = 0.0;
  p = 0;
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = i + 1; j < total; ++j) {
      const double k = std::exp(-sq[p++] * inv);
      if (j < n) {
        kxx += k;
      } else if (i >= n) {
        kyy += k;
      } else {
        kxy += k;
      }
    }
  }
  const double dn = static_cast<double>(n), dm = static_cast<double>(m);
  res.raw = 2.0 * kxx / (dn * (dn - 1.0)) + 2.0 * kyy / (dm * (dm - 1.0)) - 2.0 * kxy / (dn * dm);
  res.value = std::max(0.0, res.raw);
  return res;
}

double mean_squared_error(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) throw ShapeError("mean_squared_error: shape mismatch");
  if (a.size() == 0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

}  // namespace sat::eval
