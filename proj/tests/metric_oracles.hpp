#pragma once

// Brute-force reference implementations shared by unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

namespace oracle {

// Full ranking: score descending, index ascending.
inline std::vector<std::size_t> ranking(const std::vector<double>& s) {
  std::vector<std::size_t> idx(s.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return s[a] > s[b]; });
  return idx;
}

inline double recall(const std::vector<double>& s, const std::vector<std::size_t>& truth, std::size_t k) {
  auto r = ranking(s);
  std::set<std::size_t> top(r.begin(), r.begin() + k), t(truth.begin(), truth.end());
  std::vector<std::size_t> both;
  std::set_intersection(top.begin(), top.end(), t.begin(), t.end(), std::back_inserter(both));
  return static_cast<double>(both.size()) / static_cast<double>(t.size());
}

inline double dcg_of(const std::vector<std::size_t>& order, const std::set<std::size_t>& t, std::size_t k) {
  double d = 0.0;
  for (std::size_t r = 0; r < k && r < order.size(); ++r) {
    if (t.count(order[r])) d += 1.0 / std::log2(static_cast<double>(r) + 2.0);
  }
  return d;
}

// Closed-form ideal DCG.
inline double ndcg(const std::vector<double>& s, const std::vector<std::size_t>& truth, std::size_t k) {
  std::set<std::size_t> t(truth.begin(), truth.end());
  double ideal = 0.0;
  for (std::size_t r = 1; r <= std::min(k, t.size()); ++r) ideal += 1.0 / std::log2(static_cast<double>(r) + 1.0);
  return dcg_of(ranking(s), t, k) / ideal;
}

// Ideal DCG found by enumerating every ordering of the candidates (small F only).
inline double ndcg_by_permutation(const std::vector<double>& s, const std::vector<std::size_t>& truth, std::size_t k) {
  std::set<std::size_t> t(truth.begin(), truth.end());
  std::vector<std::size_t> perm(s.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double ideal = 0.0;
  do {
    ideal = std::max(ideal, dcg_of(perm, t, k));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return dcg_of(ranking(s), t, k) / ideal;
}

inline double auc(const std::vector<double>& pos, const std::vector<double>& neg) {
  double s = 0.0;
  for (double p : pos)
    for (double n : neg) s += p > n ? 1.0 : (p == n ? 0.5 : 0.0);
  return s / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

// Mean over positives of the precision at that positive's score threshold.
inline double ap(const std::vector<double>& pos, const std::vector<double>& neg) {
  double total = 0.0;
  for (double p : pos) {
    double above = 0.0, pos_above = 0.0;
    for (double q : pos) pos_above += q >= p;
    above = pos_above;
    for (double n : neg) above += n >= p;
    total += pos_above / above;
  }
  return total / static_cast<double>(pos.size());
}

// AP as an exact fraction, rounded to double once.
inline double ap_exact(const std::vector<double>& pos, const std::vector<double>& neg) {
  long long num = 0, den = 1;
  for (double p : pos) {
    long long pos_above = 0, above = 0;
    for (double q : pos) pos_above += q >= p;
    above = pos_above;
    for (double n : neg) above += n >= p;
    // num/den + pos_above/above
    const long long l = std::lcm(den, above);
    num = num * (l / den) + pos_above * (l / above);
    den = l;
    const long long g = std::gcd(num, den);
    num /= g;
    den /= g;
  }
  return static_cast<double>(num) / static_cast<double>(den * static_cast<long long>(pos.size()));
}

}  // namespace oracle
