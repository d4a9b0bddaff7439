#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "metric_oracles.hpp"
#include "sat/eval/metrics.hpp"

using namespace sat::eval;
using sat::num::Tensor;

namespace {

std::vector<double> tied_scores(std::size_t f, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(0, 6);
  std::vector<double> s(f);
  for (double& v : s) v = d(rng) * 0.25;
  return s;
}

std::vector<std::size_t> random_truth(std::size_t f, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> size(1, f / 2);
  std::vector<std::size_t> dims(f);
  std::iota(dims.begin(), dims.end(), std::size_t{0});
  std::shuffle(dims.begin(), dims.end(), rng);
  dims.resize(size(rng));
  return dims;
}

Tensor gaussian(std::size_t n, std::size_t d, double shift, std::mt19937_64& rng) {
  std::normal_distribution<double> g(shift, 1.0);
  Tensor t = Tensor::matrix(n, d);
  for (double& v : t.values()) v = g(rng);
  return t;
}

}  // namespace

TEST(Recall, Examples) {
  std::vector<double> s(20, 0.0);
  s[4] = 3.0;
  s[7] = 2.0;
  std::vector<std::size_t> truth{4, 7};
  EXPECT_DOUBLE_EQ(recall_at_k(s, truth, 10), 1.0);
  // ranking [3, 5, 1, ...]
  std::vector<double> r{0.1, 0.7, 0.0, 0.9, 0.0, 0.8};
  std::vector<std::size_t> t2{1, 3};
  EXPECT_DOUBLE_EQ(recall_at_k(r, t2, 2), 0.5);
  EXPECT_THROW(recall_at_k(r, std::vector<std::size_t>{}, 2), std::invalid_argument);
  EXPECT_THROW(recall_at_k(r, t2, 7), std::invalid_argument);
}

TEST(Recall, TiesBrokenByIndex) {
  std::vector<double> s{1, 1, 1, 1};
  EXPECT_DOUBLE_EQ(recall_at_k(s, std::vector<std::size_t>{0}, 1), 1.0);
  EXPECT_DOUBLE_EQ(recall_at_k(s, std::vector<std::size_t>{3}, 1), 0.0);
}

TEST(Recall, MatchesSetIntersectionOracle) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 300; ++i) {
    auto s = tied_scores(30, rng);
    auto t = random_truth(30, rng);
    for (std::size_t k : {1u, 5u, 10u, 30u}) EXPECT_EQ(recall_at_k(s, t, k), oracle::recall(s, t, k));
  }
}

TEST(Ndcg, Examples) {
  std::vector<double> s{0.9, 0.8, 0.1, 0.0};
  EXPECT_DOUBLE_EQ(ndcg_at_k(s, std::vector<std::size_t>{0, 1}, 3), 1.0);
  EXPECT_NEAR(ndcg_at_k(s, std::vector<std::size_t>{1}, 2), 1.0 / std::log2(3.0), 1e-15);
  EXPECT_NEAR(1.0 / std::log2(3.0), 0.6309, 1e-4);
}

TEST(Ndcg, MatchesPermutationOracle) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 60; ++i) {
    auto s = tied_scores(8, rng);
    auto t = random_truth(8, rng);
    for (std::size_t k : {1u, 3u, 8u}) EXPECT_NEAR(ndcg_at_k(s, t, k), oracle::ndcg_by_permutation(s, t, k), 1e-15);
  }
}

TEST(Ndcg, CanDropWhileTheIdealStillGrows) {
  // truth {0, 4}: dim 0 ranked first, dim 4 ranked fifth
  std::vector<double> s{9, 8, 7, 6, 5};
  std::vector<std::size_t> t{0, 4};
  EXPECT_DOUBLE_EQ(ndcg_at_k(s, t, 1), 1.0);
  EXPECT_NEAR(ndcg_at_k(s, t, 2), 1.0 / (1.0 + 1.0 / std::log2(3.0)), 1e-15);
  EXPECT_LT(ndcg_at_k(s, t, 2), ndcg_at_k(s, t, 1));
}

TEST(Profile, MonotoneInKPerNodeAndSkipsEmptyRows) {
  std::mt19937_64 rng(3);
  const std::size_t n = 40, f = 60;
  Tensor scores = Tensor::matrix(n, f);
  std::vector<sat::num::SparseEntry> e;
  for (std::size_t r = 0; r < n; ++r) {
    auto s = tied_scores(f, rng);
    std::copy(s.begin(), s.end(), scores.row(r).begin());
    if (r % 10 == 9) continue;
    for (std::size_t c : random_truth(f, rng)) e.push_back({r, c, 1.0});
  }
  sat::num::SparseMatrix truth(n, f, e);
  std::vector<std::size_t> ks{10, 20, 50};
  ProfilingResult p = profile(scores, truth, ks);
  EXPECT_EQ(p.skipped, 4u);
  EXPECT_EQ(p.evaluated, 36u);
  EXPECT_LE(p.recall[10], p.recall[20]);
  EXPECT_LE(p.recall[20], p.recall[50]);
  double mean10 = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    if (truth.row_nnz(r) == 0) continue;
    std::vector<double> s(scores.row(r).begin(), scores.row(r).end());
    std::vector<std::size_t> t(truth.col_index().begin() + truth.row_begin(r), truth.col_index().begin() + truth.row_end(r));
    double prev_r = 0.0;
    for (std::size_t k = 1; k <= f; ++k) {
      const double rk = recall_at_k(s, t, k);
      EXPECT_GE(rk, prev_r);
      prev_r = rk;
    }
    // once k covers the whole truth set the ideal is fixed and NDCG can only grow
    double prev_n = 0.0;
    for (std::size_t k = t.size(); k <= f; ++k) {
      const double nk = ndcg_at_k(s, t, k);
      EXPECT_GE(nk + 1e-15, prev_n);
      prev_n = nk;
    }
    mean10 += recall_at_k(s, t, 10);
  }
  EXPECT_NEAR(p.recall[10], mean10 / 36.0, 1e-12);
}

TEST(AucAp, Examples) {
  auto r = auc_ap(std::vector<double>{0.9, 0.8}, std::vector<double>{0.1, 0.2, 0.3});
  EXPECT_DOUBLE_EQ(r.auc, 1.0);
  EXPECT_DOUBLE_EQ(r.ap, 1.0);
  auto c = auc_ap(std::vector<double>{0.5, 0.5}, std::vector<double>{0.5, 0.5, 0.5});
  EXPECT_DOUBLE_EQ(c.auc, 0.5);
  EXPECT_THROW(auc_ap(std::vector<double>{}, std::vector<double>{1.0}), std::invalid_argument);
}

TEST(AucAp, MatchesPairwiseOracle) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> pos(25), neg(25);
    const bool ties = i % 2 == 0;
    for (double& v : pos) v = ties ? std::floor(u(rng) * 5) : u(rng) + 0.2;
    for (double& v : neg) v = ties ? std::floor(u(rng) * 5) : u(rng);
    auto r = auc_ap(pos, neg);
    EXPECT_NEAR(r.auc, oracle::auc(pos, neg), 1e-12);
    EXPECT_NEAR(r.ap, oracle::ap(pos, neg), 1e-12);
    EXPECT_GE(r.auc, 0.0);
    EXPECT_LE(r.ap, 1.0);
  }
}

TEST(Mmd, IdenticalSamplesClampToZero) {
  std::mt19937_64 rng(5);
  Tensor a = gaussian(50, 3, 0.0, rng);
  MmdResult r = mmd(a, a);
  EXPECT_LE(r.raw, 1e-12);
  EXPECT_EQ(r.value, 0.0);
}

TEST(Mmd, SeparatedGaussiansAreFar) {
  double total = 0.0;
  for (int seed = 0; seed < 5; ++seed) {
    std::mt19937_64 rng(seed);
    total += mmd(gaussian(500, 2, 0.0, rng), gaussian(500, 2, 5.0, rng)).value;
  }
  EXPECT_GT(total / 5.0, 0.5);
}

TEST(Mmd, NullDistributionIsNearZero) {
  std::mt19937_64 rng(6);
  MmdResult r = mmd(gaussian(500, 2, 0.0, rng), gaussian(500, 2, 0.0, rng));
  EXPECT_LT(std::abs(r.raw), 0.02);
}

TEST(Mmd, DegenerateBandwidthFallsBackToOne) {
  Tensor a = Tensor::matrix(3, 2, 1.0);
  MmdResult r = mmd(a, a);
  EXPECT_EQ(r.bandwidth, 1.0);
  EXPECT_THROW(mmd(Tensor::matrix(1, 2), a), std::invalid_argument);
}
