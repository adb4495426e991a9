#include "bsfw/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "bsfw/rng.hpp"

namespace bsfw {

double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2_sq(const Vector& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return s;
}

double norm2(const Vector& a) { return std::sqrt(norm2_sq(a)); }

double norm1(const Vector& a) {
  double s = 0.0;
  for (double v : a) s += std::abs(v);
  return s;
}

void scale(Vector& a, double c) {
  for (double& v : a) v *= c;
}

Vector sub(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionError("sub: length mismatch");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

void axpy(double c, const Vector& x, Vector& y) {
  if (x.size() != y.size()) throw DimensionError("axpy: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += c * x[i];
}

bool all_finite(const Vector& a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

bool is_zero(const Vector& a) {
  for (double v : a)
    if (v != 0.0) return false;
  return true;
}

SparseRowMatrix::SparseRowMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw DimensionError("SparseRowMatrix: negative shape");
  row_ptr_.assign(static_cast<std::size_t>(rows) + 1, 0);
}

void SparseRowMatrix::set_row(int i, std::span<const std::pair<int, double>> entries) {
  check_row(i);
  if (row_ptr_[static_cast<std::size_t>(i)] != values_.size())
    throw DimensionError("SparseRowMatrix: rows must be set in order");
  int prev = -1;
  for (const auto& [col, val] : entries) {
    if (col <= prev) throw DimensionError("SparseRowMatrix: column indices must strictly increase");
    if (col < 0 || col >= cols_) throw DimensionError("SparseRowMatrix: column out of range");
    if (!std::isfinite(val)) throw DimensionError("SparseRowMatrix: non-finite value");
    prev = col;
    col_idx_.push_back(col);
    values_.push_back(val);
  }
  for (std::size_t r = static_cast<std::size_t>(i) + 1; r < row_ptr_.size(); ++r)
    row_ptr_[r] = values_.size();
}

void SparseRowMatrix::check_row(int i) const {
  if (i < 0 || i >= rows_) throw DimensionError("SparseRowMatrix: row out of range");
}

double SparseRowMatrix::row_dot(int i, const Vector& x) const {
  check_row(i);
  if (static_cast<int>(x.size()) != cols_) throw DimensionError("row_dot: length mismatch");
  double s = 0.0;
  for (std::size_t k = row_ptr_[static_cast<std::size_t>(i)]; k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k)
    s += values_[k] * x[static_cast<std::size_t>(col_idx_[k])];
  return s;
}

void SparseRowMatrix::add_row_to(int i, double c, Vector& out) const {
  check_row(i);
  if (static_cast<int>(out.size()) != cols_) throw DimensionError("add_row_to: length mismatch");
  for (std::size_t k = row_ptr_[static_cast<std::size_t>(i)]; k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k)
    out[static_cast<std::size_t>(col_idx_[k])] += c * values_[k];
}

double SparseRowMatrix::row_norm2_sq(int i) const {
  check_row(i);
  double s = 0.0;
  for (std::size_t k = row_ptr_[static_cast<std::size_t>(i)]; k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k)
    s += values_[k] * values_[k];
  return s;
}

Vector SparseRowMatrix::multiply(const Vector& x) const {
  if (static_cast<int>(x.size()) != cols_) throw DimensionError("multiply: length mismatch");
  Vector out(static_cast<std::size_t>(rows_), 0.0);
  for (int i = 0; i < rows_; ++i) out[static_cast<std::size_t>(i)] = row_dot(i, x);
  return out;
}

Vector SparseRowMatrix::multiply_transpose(const Vector& y) const {
  if (static_cast<int>(y.size()) != rows_) throw DimensionError("multiply_transpose: length mismatch");
  Vector out(static_cast<std::size_t>(cols_), 0.0);
  for (int i = 0; i < rows_; ++i) add_row_to(i, y[static_cast<std::size_t>(i)], out);
  return out;
}

std::vector<std::pair<int, double>> SparseRowMatrix::row_entries(int i) const {
  check_row(i);
  std::vector<std::pair<int, double>> out;
  for (std::size_t k = row_ptr_[static_cast<std::size_t>(i)]; k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k)
    out.emplace_back(col_idx_[k], values_[k]);
  return out;
}

DenseMatrix::DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw DimensionError("DenseMatrix: negative shape");
  data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0);
}

DenseMatrix::DenseMatrix(int rows, int cols, Vector data) : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
    throw DimensionError("DenseMatrix: data size does not match shape");
  if (!all_finite(data_)) throw DimensionError("DenseMatrix: non-finite entry");
}

std::vector<double> singular_values(const DenseMatrix& a) {
  // One-sided Jacobi on the tall orientation: orthogonalize column pairs until
  // every pair is numerically orthogonal; column norms are the singular values.
  int rows = a.rows(), cols = a.cols();
  bool transposed = rows < cols;
  if (transposed) std::swap(rows, cols);
  std::vector<Vector> col(static_cast<std::size_t>(cols), Vector(static_cast<std::size_t>(rows)));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      col[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = transposed ? a.at(j, i) : a.at(i, j);

  const double eps = 1e-15;
  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < cols - 1; ++p) {
      for (int q = p + 1; q < cols; ++q) {
        auto& cp = col[static_cast<std::size_t>(p)];
        auto& cq = col[static_cast<std::size_t>(q)];
        const double alpha = norm2_sq(cp);
        const double beta = norm2_sq(cq);
        const double gamma = dot(cp, cq);
        if (std::abs(gamma) <= eps * std::sqrt(alpha * beta) || gamma == 0.0) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int i = 0; i < rows; ++i) {
          const double vp = cp[static_cast<std::size_t>(i)];
          const double vq = cq[static_cast<std::size_t>(i)];
          cp[static_cast<std::size_t>(i)] = c * vp - s * vq;
          cq[static_cast<std::size_t>(i)] = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sv(static_cast<std::size_t>(cols));
  for (int j = 0; j < cols; ++j) sv[static_cast<std::size_t>(j)] = norm2(col[static_cast<std::size_t>(j)]);
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

double nuclear_norm(const DenseMatrix& a) {
  const auto sv = singular_values(a);
  double s = 0.0;
  for (double v : sv) s += v;
  return s;
}

double spectral_norm_sq_upper(const SparseRowMatrix& a) {
  const int n = a.cols();
  if (n == 0 || a.nnz() == 0) return 0.0;
  Rng rng(0x5eedu ^ (static_cast<std::uint64_t>(a.rows()) << 20) ^ static_cast<std::uint64_t>(n));
  Vector v(static_cast<std::size_t>(n));
  for (double& x : v) x = rng.next_double() - 0.5;
  double nv = norm2(v);
  if (nv == 0.0) v[0] = 1.0, nv = 1.0;
  scale(v, 1.0 / nv);

  double rq = 0.0;
  for (int it = 0; it < 5000; ++it) {
    Vector w = a.multiply_transpose(a.multiply(v));  // A^T A v
    const double rq_new = dot(v, w);
    const double nw = norm2(w);
    if (nw == 0.0) return 0.0;
    scale(w, 1.0 / nw);
    v = std::move(w);
    if (it > 0 && std::abs(rq_new - rq) <= 1e-12 * std::max(rq_new, 1e-300)) {
      rq = rq_new;
      break;
    }
    rq = rq_new;
  }
  // Rayleigh quotients approach the top eigenvalue from below; pad the result.
  return rq * (1.0 + 1e-4);
}

}  // namespace bsfw
