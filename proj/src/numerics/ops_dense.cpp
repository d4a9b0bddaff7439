#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "eigen_map.hpp"
#include "sat/errors.hpp"
#include "sat/numerics/ops.hpp"

namespace sat::num {

using detail::as_matrix;

namespace {

void require_matrix(const Tensor& t, const char* op) {
  if (t.rank() != 2) {
    throw ShapeError(std::string(op) + ": expected a matrix, got " + shape_string(t.shape()));
  }
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_string(a.shape()) + " vs " +
                     shape_string(b.shape()));
  }
}

/// Pointwise op whose derivative is expressed through input x and output y.
template <typename Fwd, typename Deriv>
Var unary(Var x, Fwd fwd, Deriv deriv) {
  const Tensor& xv = x.value();
  Tensor out(xv.shape());
  for (std::size_t i = 0; i < xv.size(); ++i) out[i] = fwd(xv[i]);
  const std::size_t xid = x.id();
  const std::size_t yid = x.tape().size();  // id the output is about to receive
  return x.tape().record(std::move(out), {x}, [xid, yid, deriv](Tape& tape, const Tensor& g) {
    const Tensor& xin = tape.value(xid);
    const Tensor& yout = tape.value(yid);
    Tensor& gx = tape.grad_buffer(xid);
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * deriv(xin[i], yout[i]);
  });
}

}  // namespace

double sigmoid_scalar(double x) {
  if (x >= 0) {
    const double e = std::exp(-x);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus_scalar(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

Tensor matmul_values(const Tensor& a, const Tensor& b) {
  require_matrix(a, "matmul");
  require_matrix(b, "matmul");
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: inner dimensions differ " + shape_string(a.shape()) + " · " +
                     shape_string(b.shape()));
  }
  Tensor out = Tensor::matrix(a.rows(), b.cols());
  if (out.size()) as_matrix(out).noalias() = as_matrix(a) * as_matrix(b);
  return out;
}

Var matmul(Var a, Var b) {
  Tensor out = matmul_values(a.value(), b.value());
  const std::size_t ia = a.id();
  const std::size_t ib = b.id();
  return a.tape().record(std::move(out), {a, b}, [ia, ib](Tape& tape, const Tensor& g) {
    const auto gm = as_matrix(g);
    if (tape.requires_grad(ia)) {
      as_matrix(tape.grad_buffer(ia)).noalias() += gm * as_matrix(tape.value(ib)).transpose();
    }
    if (tape.requires_grad(ib)) {
      as_matrix(tape.grad_buffer(ib)).noalias() += as_matrix(tape.value(ia)).transpose() * gm;
    }
  });
}

Var matmul_nt(Var a, Var b) {
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  require_matrix(av, "matmul_nt");
  require_matrix(bv, "matmul_nt");
  if (av.cols() != bv.cols()) {
    throw ShapeError("matmul_nt: inner dimensions differ " + shape_string(av.shape()) + " · " +
                     shape_string(bv.shape()) + "ᵀ");
  }
  Tensor out = Tensor::matrix(av.rows(), bv.rows());
  if (out.size()) as_matrix(out).noalias() = as_matrix(av) * as_matrix(bv).transpose();
  const std::size_t ia = a.id();
  const std::size_t ib = b.id();
  return a.tape().record(std::move(out), {a, b}, [ia, ib](Tape& tape, const Tensor& g) {
    const auto gm = as_matrix(g);
    if (tape.requires_grad(ia)) {
      as_matrix(tape.grad_buffer(ia)).noalias() += gm * as_matrix(tape.value(ib));
    }
    if (tape.requires_grad(ib)) {
      as_matrix(tape.grad_buffer(ib)).noalias() += gm.transpose() * as_matrix(tape.value(ia));
    }
  });
}

Var transpose(Var a) {
  const Tensor& av = a.value();
  require_matrix(av, "transpose");
  Tensor out = Tensor::matrix(av.cols(), av.rows());
  as_matrix(out) = as_matrix(av).transpose();
  const std::size_t ia = a.id();
  return a.tape().record(std::move(out), {a}, [ia](Tape& tape, const Tensor& g) {
    as_matrix(tape.grad_buffer(ia)) += as_matrix(g).transpose();
  });
}

Var add(Var a, Var b) {
  require_same_shape(a.value(), b.value(), "add");
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += bv[i];
  const std::size_t ia = a.id();
  const std::size_t ib = b.id();
  return a.tape().record(std::move(out), {a, b}, [ia, ib](Tape& tape, const Tensor& g) {
    for (std::size_t id : {ia, ib}) {
      if (!tape.requires_grad(id)) continue;
      Tensor& gx = tape.grad_buffer(id);
      for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
    }
  });
}

Var sub(Var a, Var b) {
  require_same_shape(a.value(), b.value(), "sub");
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= bv[i];
  const std::size_t ia = a.id();
  const std::size_t ib = b.id();
  return a.tape().record(std::move(out), {a, b}, [ia, ib](Tape& tape, const Tensor& g) {
    if (tape.requires_grad(ia)) {
      Tensor& ga = tape.grad_buffer(ia);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
    }
    if (tape.requires_grad(ib)) {
      Tensor& gb = tape.grad_buffer(ib);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] -= g[i];
    }
  });
}

Var mul(Var a, Var b) {
  require_same_shape(a.value(), b.value(), "mul");
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  const std::size_t ia = a.id();
  const std::size_t ib = b.id();
  return a.tape().record(std::move(out), {a, b}, [ia, ib](Tape& tape, const Tensor& g) {
    const Tensor& av = tape.value(ia);
    const Tensor& bv = tape.value(ib);
    if (tape.requires_grad(ia)) {
      Tensor& ga = tape.grad_buffer(ia);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * bv[i];
    }
    if (tape.requires_grad(ib)) {
      Tensor& gb = tape.grad_buffer(ib);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * av[i];
    }
  });
}

Var add_bias(Var x, Var bias) {
  const Tensor& xv = x.value();
  const Tensor& bv = bias.value();
  require_matrix(xv, "add_bias");
  if (bv.size() != xv.cols()) {
    throw ShapeError("add_bias: bias " + shape_string(bv.shape()) + " does not match " +
                     shape_string(xv.shape()));
  }
  Tensor out = xv;
  const std::size_t n = xv.cols();
  for (std::size_t r = 0; r < xv.rows(); ++r) {
    double* row = out.data() + r * n;
    for (std::size_t c = 0; c < n; ++c) row[c] += bv[c];
  }
  const std::size_t ix = x.id();
  const std::size_t ib = bias.id();
  return x.tape().record(std::move(out), {x, bias}, [ix, ib, n](Tape& tape, const Tensor& g) {
    if (tape.requires_grad(ix)) {
      Tensor& gx = tape.grad_buffer(ix);
      for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
    }
    if (tape.requires_grad(ib)) {
      Tensor& gb = tape.grad_buffer(ib);
      const std::size_t rows = g.size() / n;
      for (std::size_t r = 0; r < rows; ++r) {
        const double* row = g.data() + r * n;
        for (std::size_t c = 0; c < n; ++c) gb[c] += row[c];
      }
    }
  });
}

Var scale(Var x, double factor) {
  return unary(x, [factor](double v) { return v * factor; },
               [factor](double, double) { return factor; });
}

Var relu(Var x) {
  return unary(x, [](double v) { return v > 0.0 ? v : 0.0; },
               [](double v, double) { return v > 0.0 ? 1.0 : 0.0; });
}

Var leaky_relu(Var x, double slope) {
  return unary(x, [slope](double v) { return v > 0.0 ? v : slope * v; },
               [slope](double v, double) { return v > 0.0 ? 1.0 : slope; });
}

Var sigmoid(Var x) {
  return unary(x, [](double v) { return sigmoid_scalar(v); },
               [](double, double y) { return y * (1.0 - y); });
}

Var exp(Var x) {
  return unary(x, [](double v) { return std::exp(v); }, [](double, double y) { return y; });
}

Var log(Var x) {
  for (double v : x.value().values()) {
    if (!(v > 0.0)) throw std::domain_error("log of non-positive value");
  }
  return unary(x, [](double v) { return std::log(v); }, [](double v, double) { return 1.0 / v; });
}

Var square(Var x) {
  return unary(x, [](double v) { return v * v; }, [](double v, double) { return 2.0 * v; });
}

Var softplus(Var x) {
  return unary(x, [](double v) { return softplus_scalar(v); },
               [](double v, double) { return sigmoid_scalar(v); });
}

Var sum(Var x) {
  double s = 0.0;
  for (double v : x.value().values()) s += v;
  const std::size_t ix = x.id();
  return x.tape().record(Tensor::scalar(s), {x}, [ix](Tape& tape, const Tensor& g) {
    Tensor& gx = tape.grad_buffer(ix);
    for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += g[0];
  });
}

Var mean(Var x) {
  const std::size_t n = x.value().size();
  if (n == 0) throw ShapeError("mean of empty tensor");
  return scale(sum(x), 1.0 / static_cast<double>(n));
}

Var gather_rows(Var x, std::span<const std::size_t> rows) {
  const Tensor& xv = x.value();
  require_matrix(xv, "gather_rows");
  const std::size_t n = xv.cols();
  Tensor out = Tensor::matrix(rows.size(), n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= xv.rows()) throw ShapeError("gather_rows: row index out of range");
    std::copy_n(xv.data() + rows[i] * n, n, out.data() + i * n);
  }
  const std::size_t ix = x.id();
  std::vector<std::size_t> idx(rows.begin(), rows.end());
  return x.tape().record(std::move(out), {x},
                         [ix, idx = std::move(idx), n](Tape& tape, const Tensor& g) {
                           Tensor& gx = tape.grad_buffer(ix);
                           for (std::size_t i = 0; i < idx.size(); ++i) {
                             double* dst = gx.data() + idx[i] * n;
                             const double* src = g.data() + i * n;
                             for (std::size_t c = 0; c < n; ++c) dst[c] += src[c];
                           }
                         });
}

Var dropout(Var x, double rate, bool training, Rng& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw std::invalid_argument("dropout rate must lie in [0, 1), got " + std::to_string(rate));
  }
  if (!training || rate == 0.0) return x;
  const Tensor& xv = x.value();
  const double keep_scale = 1.0 / (1.0 - rate);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> mask(xv.size());
  for (double& m : mask) m = uniform(rng) < rate ? 0.0 : keep_scale;
  Tensor out = xv;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= mask[i];
  const std::size_t ix = x.id();
  return x.tape().record(std::move(out), {x}, [ix, mask = std::move(mask)](Tape& tape, const Tensor& g) {
    Tensor& gx = tape.grad_buffer(ix);
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * mask[i];
  });
}

}  // namespace sat::num
