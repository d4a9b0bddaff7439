#include "sat/numerics/sparse.hpp"

#include <algorithm>
#include <string>

#include "sat/errors.hpp"

namespace sat::num {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<SparseEntry> entries)
    : rows_(rows), cols_(cols) {
  for (const auto& e : entries) {
    if (e.row >= rows || e.col >= cols) {
      throw ShapeError("sparse entry (" + std::to_string(e.row) + "," + std::to_string(e.col) +
                       ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
    }
  }
  std::sort(entries.begin(), entries.end(), [](const SparseEntry& a, const SparseEntry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].row == entries[i - 1].row && entries[i].col == entries[i - 1].col) {
      throw ShapeError("duplicate sparse coordinate (" + std::to_string(entries[i].row) + "," +
                       std::to_string(entries[i].col) + ")");
    }
  }
  row_ptr_.assign(rows + 1, 0);
  col_index_.reserve(entries.size());
  row_index_.reserve(entries.size());
  values_.reserve(entries.size());
  for (const auto& e : entries) {
    ++row_ptr_[e.row + 1];
    col_index_.push_back(e.col);
    row_index_.push_back(e.row);
    values_.push_back(e.value);
  }
  for (std::size_t r = 0; r < rows; ++r) row_ptr_[r + 1] += row_ptr_[r];
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<SparseEntry> entries;
  entries.reserve(n);
  for (std::size_t i = 0; i < n; ++i) entries.push_back({i, i, 1.0});
  return SparseMatrix(n, n, std::move(entries));
}

SparseMatrix SparseMatrix::from_dense(const Tensor& dense) {
  std::vector<SparseEntry> entries;
  for (std::size_t r = 0; r < dense.rows(); ++r) {
    for (std::size_t c = 0; c < dense.cols(); ++c) {
      if (dense(r, c) != 0.0) entries.push_back({r, c, dense(r, c)});
    }
  }
  return SparseMatrix(dense.rows(), dense.cols(), std::move(entries));
}

double SparseMatrix::at(std::size_t r, std::size_t c) const {
  const auto first = col_index_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r]);
  const auto last = col_index_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r + 1]);
  const auto it = std::lower_bound(first, last, c);
  if (it == last || *it != c) return 0.0;
  return values_[static_cast<std::size_t>(it - col_index_.begin())];
}

bool SparseMatrix::contains(std::size_t r, std::size_t c) const {
  const auto first = col_index_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r]);
  const auto last = col_index_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r + 1]);
  return std::binary_search(first, last, c);
}

std::vector<SparseEntry> SparseMatrix::entries() const {
  std::vector<SparseEntry> out;
  out.reserve(nnz());
  for (std::size_t k = 0; k < nnz(); ++k) out.push_back({row_index_[k], col_index_[k], values_[k]});
  return out;
}

Tensor SparseMatrix::to_dense() const {
  Tensor out = Tensor::matrix(rows_, cols_);
  for (std::size_t k = 0; k < nnz(); ++k) out(row_index_[k], col_index_[k]) = values_[k];
  return out;
}

Tensor SparseMatrix::dense_rows(std::span<const std::size_t> rows) const {
  Tensor out = Tensor::matrix(rows.size(), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t r = rows[i];
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) out(i, col_index_[k]) = values_[k];
  }
  return out;
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<SparseEntry> t;
  t.reserve(nnz());
  for (std::size_t k = 0; k < nnz(); ++k) t.push_back({col_index_[k], row_index_[k], values_[k]});
  return SparseMatrix(cols_, rows_, std::move(t));
}

SparseMatrix SparseMatrix::select_rows(std::span<const std::size_t> rows) const {
  std::vector<SparseEntry> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t r = rows[i];
    if (r >= rows_) throw ShapeError("select_rows: row " + std::to_string(r) + " out of range");
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      out.push_back({i, col_index_[k], values_[k]});
    }
  }
  return SparseMatrix(rows.size(), cols_, std::move(out));
}

SparseMatrix SparseMatrix::with_values(double v) const {
  SparseMatrix copy = *this;
  std::fill(copy.values_.begin(), copy.values_.end(), v);
  return copy;
}

}  // namespace sat::num
