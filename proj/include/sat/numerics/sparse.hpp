#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sat/numerics/tensor.hpp"

namespace sat::num {

struct SparseEntry {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
  bool operator==(const SparseEntry&) const = default;
};

/// Compressed sparse row matrix. Coordinates are unique and sorted row-major.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  /// Validates bounds, sorts row-major and rejects duplicate coordinates.
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<SparseEntry> entries);

  static SparseMatrix identity(std::size_t n);
  static SparseMatrix from_dense(const Tensor& dense);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return col_index_.size(); }

  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const std::size_t> col_index() const noexcept { return col_index_; }
  std::span<const double> values() const noexcept { return values_; }
  /// Row index of every stored entry, aligned with col_index().
  std::span<const std::size_t> row_index() const noexcept { return row_index_; }

  std::size_t row_begin(std::size_t r) const { return row_ptr_[r]; }
  std::size_t row_end(std::size_t r) const { return row_ptr_[r + 1]; }
  std::size_t row_nnz(std::size_t r) const { return row_ptr_[r + 1] - row_ptr_[r]; }

  /// Value at (r, c), zero when not stored.
  double at(std::size_t r, std::size_t c) const;
  bool contains(std::size_t r, std::size_t c) const;

  std::vector<SparseEntry> entries() const;
  Tensor to_dense() const;
  Tensor dense_rows(std::span<const std::size_t> rows) const;
  SparseMatrix transpose() const;
  /// Sub-matrix holding the listed rows in the given order.
  SparseMatrix select_rows(std::span<const std::size_t> rows) const;
  /// Same pattern with every value replaced by `v`.
  SparseMatrix with_values(double v) const;

  bool operator==(const SparseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_index_;
  std::vector<std::size_t> row_index_;
  std::vector<double> values_;
};

}  // namespace sat::num
