#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "bsfw/errors.hpp"

namespace bsfw {

// Dense value carrier for iterates, gradients and directions. Matrix-domain
// problems use the same carrier with row-major flattening.
using Vector = std::vector<double>;

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& a);
double norm1(const Vector& a);
double norm2_sq(const Vector& a);

void scale(Vector& a, double c);
// out = a - b
Vector sub(const Vector& a, const Vector& b);
// y += c * x
void axpy(double c, const Vector& x, Vector& y);
bool all_finite(const Vector& a);
bool is_zero(const Vector& a);

// Row-compressed sparse matrix; column indices strictly increasing per row.
class SparseRowMatrix {
 public:
  SparseRowMatrix() = default;
  SparseRowMatrix(int rows, int cols);

  // Entries must come ordered by strictly increasing column index.
  void set_row(int i, std::span<const std::pair<int, double>> entries);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  double row_dot(int i, const Vector& x) const;
  // out += c * (row i)
  void add_row_to(int i, double c, Vector& out) const;
  double row_norm2_sq(int i) const;

  Vector multiply(const Vector& x) const;            // A x
  Vector multiply_transpose(const Vector& y) const;  // A^T y

  // Entries of row i as (column, value) pairs.
  std::vector<std::pair<int, double>> row_entries(int i) const;

  bool operator==(const SparseRowMatrix&) const = default;

 private:
  void check_row(int i) const;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols);
  DenseMatrix(int rows, int cols, Vector data);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& at(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double at(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const Vector& data() const { return data_; }
  Vector& data() { return data_; }

  bool operator==(const DenseMatrix&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  Vector data_;
};

// All singular values, descending (one-sided Jacobi; desk-scale sizes).
std::vector<double> singular_values(const DenseMatrix& a);
double nuclear_norm(const DenseMatrix& a);

// Largest eigenvalue of A^T A by power iteration with a fixed deterministic
// start vector. Slightly inflated so the result is a safe upper bound.
double spectral_norm_sq_upper(const SparseRowMatrix& a);

}  // namespace bsfw
