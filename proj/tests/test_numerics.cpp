#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "sat/errors.hpp"
#include "sat/numerics/adam.hpp"
#include "sat/numerics/grad_check.hpp"
#include "sat/numerics/init.hpp"
#include "sat/numerics/ops.hpp"
#include "op_cases.hpp"

using namespace sat::num;
using optable::random_mask;
using optable::random_sparse;
using optable::random_tensor;

namespace {

Tensor dense_product(const Tensor& a, const Tensor& b) {
  Tensor out = Tensor::matrix(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      out(i, j) = s;
    }
  return out;
}

}  // namespace

TEST(Tensor, ShapeMismatchThrows) {
  EXPECT_THROW(Tensor({2, 2}, std::vector<double>{1, 2, 3}), sat::ShapeError);
}

TEST(Tensor, AssertFiniteReportsNan) {
  Tensor t = Tensor::from_rows({{1.0, std::nan("")}});
  EXPECT_FALSE(t.all_finite());
  EXPECT_THROW(t.assert_finite("t"), sat::DivergenceError);
}

TEST(Sparse, RejectsDuplicatesAndOutOfRange) {
  EXPECT_THROW(SparseMatrix(2, 2, {{0, 1, 1.0}, {0, 1, 2.0}}), sat::ShapeError);
  EXPECT_THROW(SparseMatrix(2, 2, {{2, 0, 1.0}}), sat::ShapeError);
}

TEST(Sparse, SortsRowMajor) {
  SparseMatrix s(3, 3, {{2, 0, 1.0}, {0, 2, 2.0}, {0, 1, 3.0}});
  auto e = s.entries();
  ASSERT_EQ(e.size(), 3u);
  EXPECT_EQ(e[0], (SparseEntry{0, 1, 3.0}));
  EXPECT_EQ(e[1], (SparseEntry{0, 2, 2.0}));
  EXPECT_EQ(e[2], (SparseEntry{2, 0, 1.0}));
  EXPECT_DOUBLE_EQ(s.at(0, 2), 2.0);
  EXPECT_DOUBLE_EQ(s.at(1, 1), 0.0);
}

TEST(Matmul, IdentityAndHandProduct) {
  Tape tape;
  Var i2 = tape.constant(Tensor::identity(2));
  Var m = tape.constant(Tensor::from_rows({{1, 2}, {3, 4}}));
  EXPECT_EQ(matmul(i2, m).value(), m.value());
  Var a = tape.constant(Tensor::from_rows({{1, 2}}));
  Var b = tape.constant(Tensor::from_rows({{3}, {4}}));
  EXPECT_DOUBLE_EQ(matmul(a, b).item(), 11.0);
  EXPECT_THROW(matmul(a, a), sat::ShapeError);
}

TEST(Matmul, MatchesLoopOracle) {
  Rng rng(3);
  Tensor a = random_tensor(5, 7, rng), b = random_tensor(7, 3, rng);
  EXPECT_LT(max_abs_diff(matmul_values(a, b), dense_product(a, b)), 1e-12);
}

TEST(Matmul, GradientOfSumMatchesFiniteDifferences) {
  Rng rng(7);
  Tensor b = random_tensor(4, 2, rng);
  double err = grad_check([&](Tape& t, Var a) { return sum(matmul(a, t.constant(b))); },
                          random_tensor(3, 4, rng));
  EXPECT_LT(err, 1e-6);
}

TEST(Spmm, Examples) {
  Tape tape;
  Rng rng(1);
  Tensor x = random_tensor(3, 2, rng);
  SparseMatrix eye = SparseMatrix::identity(3);
  EXPECT_EQ(spmm(eye, tape.constant(x)).value(), x);
  SparseMatrix s(2, 2, {{0, 1, 2.0}});
  Tensor out = spmm(s, tape.constant(Tensor::from_rows({{1}, {5}}))).value();
  EXPECT_EQ(out, Tensor::from_rows({{10}, {0}}));
}

TEST(Spmm, EqualsDensifiedMatmul) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    SparseMatrix s = random_sparse(6, 6, 0.3, rng);
    Tensor d = random_tensor(6, 4, rng);
    Tape tape;
    Tensor got = spmm(s, tape.constant(d)).value();
    EXPECT_LT(max_abs_diff(got, dense_product(s.to_dense(), d)), 1e-12);
  }
}

TEST(Elementwise, Examples) {
  Tape tape;
  Var x = tape.constant(Tensor({3}, std::vector<double>{-1, 0, 2}));
  EXPECT_EQ(relu(x).value(), Tensor({3}, std::vector<double>({0, 0, 2})));
  EXPECT_DOUBLE_EQ(sigmoid(tape.constant(Tensor::scalar(0.0))).item(), 0.5);
  EXPECT_THROW(log(x), std::domain_error);
  EXPECT_THROW(add(x, tape.constant(Tensor::matrix(2, 2))), sat::ShapeError);
}

TEST(Elementwise, SoftplusIsStable) {
  EXPECT_DOUBLE_EQ(softplus_scalar(1000.0), 1000.0);
  EXPECT_NEAR(softplus_scalar(-1000.0), 0.0, 1e-300);
  EXPECT_NEAR(softplus_scalar(0.0), std::log(2.0), 1e-15);
}

TEST(OpGradients, EveryOpMatchesFiniteDifferences) {
  Rng rng(2024);
  for (const auto& c : optable::op_cases()) {
    for (int trial = 0; trial < 10; ++trial) {
      const double err = grad_check(c.f, random_tensor(c.rows, c.cols, rng, c.lo, c.hi));
      EXPECT_LT(err, 1e-6) << c.name << " trial " << trial;
    }
  }
}

TEST(Tape, ReusedValueAccumulatesAdditively) {
  Parameter p{"w", Tensor::scalar(3.0), {}};
  Tape tape;
  Var w = tape.parameter(p);
  Var y = add(add(w, w), w);  // three uses
  tape.backward(sum(y));
  EXPECT_DOUBLE_EQ(p.grad[0], 3.0);
}

TEST(Tape, FrozenLeafReceivesNoGradient) {
  Parameter p{"w", Tensor::scalar(2.0), {}};
  Parameter q{"v", Tensor::scalar(5.0), {}};
  Tape tape;
  Var out = mul(tape.parameter(p), tape.frozen(q));
  tape.backward(sum(out));
  EXPECT_DOUBLE_EQ(p.grad[0], 5.0);
  EXPECT_TRUE(q.grad.empty());
}

TEST(Tape, ReplayIsBitIdentical) {
  auto run = [] {
    Rng rng(17);
    Parameter p{"w", random_tensor(4, 3, rng), {}};
    Tape tape;
    Var h = dropout(relu(matmul(tape.constant(random_tensor(5, 4, rng)), tape.parameter(p))), 0.5, true, rng);
    Var loss = mean(square(h));
    tape.backward(loss);
    return std::make_pair(loss.item(), p.grad);
  };
  auto a = run();
  auto b = run();
  EXPECT_EQ(a.first, b.first);
  EXPECT_EQ(a.second, b.second);
}

TEST(SoftmaxMasked, Examples) {
  Tape tape;
  SparseMatrix one(1, 3, {{0, 1, 1.0}});
  Tensor r1 = softmax_rows_masked(tape.constant(Tensor::from_rows({{4, -1, 7}})), one).value();
  EXPECT_EQ(r1, Tensor::from_rows({{0, 1, 0}}));
  SparseMatrix two(1, 3, {{0, 0, 1.0}, {0, 2, 1.0}});
  Tensor r2 = softmax_rows_masked(tape.constant(Tensor::from_rows({{0, 9, 0}})), two).value();
  EXPECT_DOUBLE_EQ(r2(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(r2(0, 2), 0.5);
  EXPECT_EQ(r2(0, 1), 0.0);
}

TEST(SoftmaxMasked, MatchesDirectSummation) {
  Tape tape;
  SparseMatrix full(1, 3, {{0, 0, 1.0}, {0, 1, 1.0}, {0, 2, 1.0}});
  Tensor got = softmax_rows_masked(tape.constant(Tensor::from_rows({{1, 2, 3}})), full).value();
  const double z = std::exp(1.0) + std::exp(2.0) + std::exp(3.0);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(got(0, k), std::exp(k + 1.0) / z, 1e-12);
}

TEST(SoftmaxMasked, RowsSumToOneAndZeroOffMask) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    SparseMatrix m = random_mask(7, rng);
    Tape tape;
    Tensor s = softmax_rows_masked(tape.constant(random_tensor(7, 7, rng, -20, 20)), m).value();
    for (std::size_t i = 0; i < 7; ++i) {
      double total = 0.0;
      for (std::size_t j = 0; j < 7; ++j) {
        total += s(i, j);
        if (!m.contains(i, j)) {
          EXPECT_EQ(s(i, j), 0.0);
        }
      }
      EXPECT_NEAR(total, 1.0, 1e-12);
    }
  }
}

TEST(SoftmaxMasked, EmptyRowThrows) {
  Tape tape;
  SparseMatrix m(2, 2, {{0, 0, 1.0}});
  EXPECT_THROW(softmax_rows_masked(tape.constant(Tensor::matrix(2, 2)), m), std::invalid_argument);
}

TEST(Dropout, Contract) {
  Rng rng(8);
  Tape tape;
  Tensor x = random_tensor(4, 4, rng);
  EXPECT_EQ(dropout(tape.constant(x), 0.0, true, rng).value(), x);
  EXPECT_EQ(dropout(tape.constant(x), 0.5, false, rng).value(), x);
  EXPECT_THROW(dropout(tape.constant(x), 1.0, true, rng), std::invalid_argument);
  EXPECT_THROW(dropout(tape.constant(x), -0.1, true, rng), std::invalid_argument);
}

TEST(Dropout, PreservesMeanInExpectation) {
  Rng rng(12);
  Tape tape;
  Tensor ones = Tensor::matrix(1, 100000, 1.0);
  Tensor out = dropout(tape.constant(ones), 0.5, true, rng).value();
  const double m = std::accumulate(out.values().begin(), out.values().end(), 0.0) / out.size();
  EXPECT_NEAR(m, 1.0, 0.02);
}

TEST(Glorot, BoundsDeterminismAndVariance) {
  Rng a(1), b(1);
  Tensor t = glorot_uniform(3, 3, a);
  for (double v : t.values()) EXPECT_LE(std::abs(v), 1.0);
  EXPECT_EQ(t, glorot_uniform(3, 3, b));
  Rng c(2);
  Tensor big = glorot_uniform(100, 100, c);
  double mean = 0.0, var = 0.0;
  for (double v : big.values()) mean += v;
  mean /= big.size();
  for (double v : big.values()) var += (v - mean) * (v - mean);
  var /= big.size();
  const double expect = 2.0 / 200.0;
  EXPECT_NEAR(var, expect, 0.2 * expect);
}

TEST(Adam, ZeroGradientIsFixedPoint) {
  Tensor w = Tensor::from_rows({{1.5, -2.0}});
  Tensor g = Tensor::matrix(1, 2);
  Tensor before = w;
  AdamState st;
  Tensor* ps[] = {&w};
  const Tensor* gs[] = {&g};
  for (int i = 0; i < 5; ++i) adam_step(ps, gs, st, 0.1);
  EXPECT_EQ(w, before);
  EXPECT_EQ(st.step, 5);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  Tensor w = Tensor::from_rows({{0.0, 0.0}});
  Tensor g = Tensor::from_rows({{3.0, -0.01}});
  AdamState st;
  Tensor* ps[] = {&w};
  const Tensor* gs[] = {&g};
  adam_step(ps, gs, st, 0.01);
  EXPECT_NEAR(w(0, 0), -0.01, 1e-8);
  EXPECT_NEAR(w(0, 1), 0.01, 1e-6);
}

TEST(Adam, ConvergesOnQuadraticLikeScalarRecurrence) {
  Parameter p{"w", Tensor::from_rows({{1.0, 1.0}}), {}};
  Adam opt({&p}, 0.05);
  // independent scalar recurrence for one coordinate
  double w = 1.0, m = 0.0, v = 0.0;
  for (int t = 1; t <= 200; ++t) {
    opt.zero_grad();
    Tape tape;
    tape.backward(sum(square(tape.parameter(p))));
    opt.step();
    const double g = 2.0 * w;
    m = 0.9 * m + 0.1 * g;
    v = 0.999 * v + 0.001 * g * g;
    w -= 0.05 * (m / (1 - std::pow(0.9, t))) / (std::sqrt(v / (1 - std::pow(0.999, t))) + 1e-8);
  }
  EXPECT_NEAR(p.value(0, 0), w, 1e-12);
  EXPECT_LT(std::hypot(p.value(0, 0), p.value(0, 1)), 0.1);
  EXPECT_EQ(opt.state().step, 200);
}

TEST(Adam, ShapeMismatchThrows) {
  Tensor w = Tensor::matrix(2, 2);
  Tensor g = Tensor::matrix(1, 2, 1.0);
  AdamState st;
  Tensor* ps[] = {&w};
  const Tensor* gs[] = {&g};
  EXPECT_THROW(adam_step(ps, gs, st, 0.1), sat::ShapeError);
}

TEST(GradCheck, Examples) {
  Rng rng(6);
  EXPECT_LT(grad_check([](Tape&, Var x) { return sum(x); }, random_tensor(3, 3, rng)), 1e-10);
  Tensor w = random_tensor(4, 3, rng);
  EXPECT_LT(grad_check([&](Tape& t, Var x) { return sum(sigmoid(matmul(t.constant(w), x))); },
                       random_tensor(3, 1, rng)),
            1e-6);
  EXPECT_THROW(grad_check([](Tape&, Var x) { return sum(log(x)); }, Tensor::from_rows({{-1.0}})),
               std::domain_error);
}

TEST(GradCheck, ParameterSetVariant) {
  Rng rng(9);
  ParameterSet ps;
  ps.add("a", random_tensor(3, 2, rng));
  ps.add("b", random_tensor(2, 2, rng));
  Tensor x = random_tensor(4, 3, rng);
  auto res = grad_check_params(ps, [&](Tape& t) {
    Var h = relu(matmul(t.constant(x), t.parameter(ps.at("a"))));
    return mean(sigmoid(matmul(h, t.parameter(ps.at("b")))));
  });
  EXPECT_EQ(res.coords_checked, 10u);
  EXPECT_LT(res.max_rel_error, 1e-6);
}
