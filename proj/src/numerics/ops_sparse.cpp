#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "sat/errors.hpp"
#include "sat/numerics/ops.hpp"

namespace sat::num {

namespace {

void require_pattern_match(const SparseMatrix& p, std::size_t rows, std::size_t cols, const char* op) {
  if (p.rows() != rows || p.cols() != cols) {
    throw ShapeError(std::string(op) + ": pattern " + std::to_string(p.rows()) + "x" +
                     std::to_string(p.cols()) + " vs operand " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }
}

void require_edges(const Tensor& e, const SparseMatrix& p, const char* op) {
  if (e.size() != p.nnz()) {
    throw ShapeError(std::string(op) + ": " + std::to_string(e.size()) + " edge values for " +
                     std::to_string(p.nnz()) + " pattern entries");
  }
}

}  // namespace

Var spmm(const SparseMatrix& s, Var d) {
  const Tensor& dv = d.value();
  if (dv.rank() != 2 || s.cols() != dv.rows()) {
    throw ShapeError("spmm: sparse " + std::to_string(s.rows()) + "x" + std::to_string(s.cols()) +
                     " · " + shape_string(dv.shape()));
  }
  const std::size_t n = dv.cols();
  Tensor out = Tensor::matrix(s.rows(), n);
  const auto cols = s.col_index();
  const auto vals = s.values();
  for (std::size_t r = 0; r < s.rows(); ++r) {
    double* dst = out.data() + r * n;
    for (std::size_t k = s.row_begin(r); k < s.row_end(r); ++k) {
      const double v = vals[k];
      const double* src = dv.data() + cols[k] * n;
      for (std::size_t c = 0; c < n; ++c) dst[c] += v * src[c];
    }
  }
  const std::size_t id = d.id();
  const SparseMatrix* sp = &s;
  return d.tape().record(std::move(out), {d}, [id, sp, n](Tape& tape, const Tensor& g) {
    Tensor& gd = tape.grad_buffer(id);
    const auto cols = sp->col_index();
    const auto vals = sp->values();
    for (std::size_t r = 0; r < sp->rows(); ++r) {
      const double* src = g.data() + r * n;
      for (std::size_t k = sp->row_begin(r); k < sp->row_end(r); ++k) {
        double* dst = gd.data() + cols[k] * n;
        const double v = vals[k];
        for (std::size_t c = 0; c < n; ++c) dst[c] += v * src[c];
      }
    }
  });
}

Var gather_pattern(Var dense, const SparseMatrix& pattern) {
  const Tensor& dv = dense.value();
  require_pattern_match(pattern, dv.rows(), dv.cols(), "gather_pattern");
  Tensor out({pattern.nnz()});
  const auto rows = pattern.row_index();
  const auto cols = pattern.col_index();
  for (std::size_t k = 0; k < pattern.nnz(); ++k) out[k] = dv(rows[k], cols[k]);
  const std::size_t id = dense.id();
  const SparseMatrix* p = &pattern;
  return dense.tape().record(std::move(out), {dense}, [id, p](Tape& tape, const Tensor& g) {
    Tensor& gd = tape.grad_buffer(id);
    const auto rows = p->row_index();
    const auto cols = p->col_index();
    for (std::size_t k = 0; k < p->nnz(); ++k) gd(rows[k], cols[k]) += g[k];
  });
}

Var scatter_pattern(Var edges, const SparseMatrix& pattern) {
  const Tensor& ev = edges.value();
  require_edges(ev, pattern, "scatter_pattern");
  Tensor out = Tensor::matrix(pattern.rows(), pattern.cols());
  const auto rows = pattern.row_index();
  const auto cols = pattern.col_index();
  for (std::size_t k = 0; k < pattern.nnz(); ++k) out(rows[k], cols[k]) = ev[k];
  const std::size_t id = edges.id();
  const SparseMatrix* p = &pattern;
  return edges.tape().record(std::move(out), {edges}, [id, p](Tape& tape, const Tensor& g) {
    Tensor& ge = tape.grad_buffer(id);
    const auto rows = p->row_index();
    const auto cols = p->col_index();
    for (std::size_t k = 0; k < p->nnz(); ++k) ge[k] += g(rows[k], cols[k]);
  });
}

Var edge_scores(const SparseMatrix& pattern, Var s, Var t) {
  const Tensor& sv = s.value();
  const Tensor& tv = t.value();
  if (sv.size() != pattern.rows() || tv.size() != pattern.cols()) {
    throw ShapeError("edge_scores: score vectors do not match the pattern");
  }
  Tensor out({pattern.nnz()});
  const auto rows = pattern.row_index();
  const auto cols = pattern.col_index();
  for (std::size_t k = 0; k < pattern.nnz(); ++k) out[k] = sv[rows[k]] + tv[cols[k]];
  const std::size_t is = s.id();
  const std::size_t it = t.id();
  const SparseMatrix* p = &pattern;
  return s.tape().record(std::move(out), {s, t}, [is, it, p](Tape& tape, const Tensor& g) {
    const auto rows = p->row_index();
    const auto cols = p->col_index();
    if (tape.requires_grad(is)) {
      Tensor& gs = tape.grad_buffer(is);
      for (std::size_t k = 0; k < p->nnz(); ++k) gs[rows[k]] += g[k];
    }
    if (tape.requires_grad(it)) {
      Tensor& gt = tape.grad_buffer(it);
      for (std::size_t k = 0; k < p->nnz(); ++k) gt[cols[k]] += g[k];
    }
  });
}

Var edge_softmax(const SparseMatrix& pattern, Var edges) {
  const Tensor& ev = edges.value();
  require_edges(ev, pattern, "edge_softmax");
  Tensor out({pattern.nnz()});
  for (std::size_t r = 0; r < pattern.rows(); ++r) {
    const std::size_t b = pattern.row_begin(r);
    const std::size_t e = pattern.row_end(r);
    if (b == e) throw std::invalid_argument("edge_softmax: empty row " + std::to_string(r) + " in mask");
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t k = b; k < e; ++k) mx = std::max(mx, ev[k]);
    double z = 0.0;
    for (std::size_t k = b; k < e; ++k) {
      out[k] = std::exp(ev[k] - mx);
      z += out[k];
    }
    for (std::size_t k = b; k < e; ++k) out[k] /= z;
  }
  const std::size_t id = edges.id();
  const std::size_t out_id = edges.tape().size();
  const SparseMatrix* p = &pattern;
  return edges.tape().record(std::move(out), {edges}, [id, out_id, p](Tape& tape, const Tensor& g) {
    const Tensor& a = tape.value(out_id);
    Tensor& ge = tape.grad_buffer(id);
    for (std::size_t r = 0; r < p->rows(); ++r) {
      double dot = 0.0;
      for (std::size_t k = p->row_begin(r); k < p->row_end(r); ++k) dot += a[k] * g[k];
      for (std::size_t k = p->row_begin(r); k < p->row_end(r); ++k) ge[k] += a[k] * (g[k] - dot);
    }
  });
}

Var sparse_matmul(const SparseMatrix& pattern, Var edges, Var d) {
  const Tensor& ev = edges.value();
  const Tensor& dv = d.value();
  require_edges(ev, pattern, "sparse_matmul");
  if (dv.rank() != 2 || dv.rows() != pattern.cols()) {
    throw ShapeError("sparse_matmul: pattern columns do not match " + shape_string(dv.shape()));
  }
  const std::size_t n = dv.cols();
  Tensor out = Tensor::matrix(pattern.rows(), n);
  const auto cols = pattern.col_index();
  for (std::size_t r = 0; r < pattern.rows(); ++r) {
    double* dst = out.data() + r * n;
    for (std::size_t k = pattern.row_begin(r); k < pattern.row_end(r); ++k) {
      const double w = ev[k];
      const double* src = dv.data() + cols[k] * n;
      for (std::size_t c = 0; c < n; ++c) dst[c] += w * src[c];
    }
  }
  const std::size_t ie = edges.id();
  const std::size_t id = d.id();
  const SparseMatrix* p = &pattern;
  return d.tape().record(std::move(out), {edges, d}, [ie, id, p, n](Tape& tape, const Tensor& g) {
    const auto cols = p->col_index();
    const Tensor& ev = tape.value(ie);
    const Tensor& dv = tape.value(id);
    const bool want_e = tape.requires_grad(ie);
    const bool want_d = tape.requires_grad(id);
    Tensor* ge = want_e ? &tape.grad_buffer(ie) : nullptr;
    Tensor* gd = want_d ? &tape.grad_buffer(id) : nullptr;
    for (std::size_t r = 0; r < p->rows(); ++r) {
      const double* gr = g.data() + r * n;
      for (std::size_t k = p->row_begin(r); k < p->row_end(r); ++k) {
        const double* src = dv.data() + cols[k] * n;
        if (want_e) {
          double dot = 0.0;
          for (std::size_t c = 0; c < n; ++c) dot += gr[c] * src[c];
          (*ge)[k] += dot;
        }
        if (want_d) {
          double* dst = gd->data() + cols[k] * n;
          const double w = ev[k];
          for (std::size_t c = 0; c < n; ++c) dst[c] += w * gr[c];
        }
      }
    }
  });
}

Var softmax_rows_masked(Var logits, const SparseMatrix& mask) {
  return scatter_pattern(edge_softmax(mask, gather_pattern(logits, mask)), mask);
}

}  // namespace sat::num
