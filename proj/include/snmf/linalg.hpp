#ifndef SNMF_LINALG_HPP
#define SNMF_LINALG_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "snmf/error.hpp"

namespace snmf {

// Dense row-major matrix. Holds the n x K factors (L, Z, X, Y), their
// momentum and dual companions, and every K x K Gram temporary.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);
  // Nested-list literal, handy for small fixed matrices.
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  bool all_finite() const noexcept;
  bool same_shape(const DenseMatrix& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  DenseMatrix& operator+=(const DenseMatrix& other);
  DenseMatrix& operator-=(const DenseMatrix& other);
  DenseMatrix& operator*=(double s);

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator+(DenseMatrix lhs, const DenseMatrix& rhs);
DenseMatrix operator-(DenseMatrix lhs, const DenseMatrix& rhs);
DenseMatrix operator*(DenseMatrix m, double s);
DenseMatrix operator*(double s, DenseMatrix m);

// Symmetric nonnegative matrix in compressed sparse row form. Construction
// validates symmetry, nonnegativity, finiteness and sorted column indices.
class SparseSymMatrix {
 public:
  struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
  };

  SparseSymMatrix() = default;
  SparseSymMatrix(std::size_t order, std::vector<std::size_t> row_offsets,
                  std::vector<std::size_t> col_indices, std::vector<double> values);

  // Triplets must already describe a symmetric matrix; duplicates are summed.
  static SparseSymMatrix from_triplets(std::size_t order, std::vector<Triplet> triplets);
  // Keeps every nonzero entry of a dense square matrix.
  static SparseSymMatrix from_dense(const DenseMatrix& m);
  static SparseSymMatrix identity(std::size_t order);

  std::size_t order() const noexcept { return order_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_offsets() const noexcept { return row_offsets_; }
  std::span<const std::size_t> col_indices() const noexcept { return col_indices_; }
  std::span<const double> values() const noexcept { return values_; }

  std::span<const std::size_t> row_cols(std::size_t r) const {
    return {col_indices_.data() + row_offsets_[r], row_offsets_[r + 1] - row_offsets_[r]};
  }
  std::span<const double> row_values(std::size_t r) const {
    return {values_.data() + row_offsets_[r], row_offsets_[r + 1] - row_offsets_[r]};
  }

  // Returns 0 for entries outside the sparsity pattern.
  double at(std::size_t r, std::size_t c) const;

  double frobenius_norm_squared() const;
  double sum() const;
  DenseMatrix to_dense() const;

  friend bool operator==(const SparseSymMatrix&, const SparseSymMatrix&) = default;

 private:
  std::size_t order_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<std::size_t> col_indices_;
  std::vector<double> values_;
};

// Lower-triangular C with C * C^T equal to the factored matrix.
class CholeskyFactor {
 public:
  std::size_t order() const noexcept { return lower_.rows(); }
  const DenseMatrix& lower() const noexcept { return lower_; }

 private:
  explicit CholeskyFactor(DenseMatrix lower) : lower_(std::move(lower)) {}
  DenseMatrix lower_;

  friend CholeskyFactor cholesky_factor(const DenseMatrix& m);
};

CholeskyFactor cholesky_factor(const DenseMatrix& m);

// Solves (C C^T) S = B column by column (forward then backward substitution).
DenseMatrix cholesky_solve(const CholeskyFactor& c, const DenseMatrix& b);

// Solves S (C C^T) = R for S, one row of R at a time. Equivalent to
// transposing cholesky_solve(c, R^T) but without the two transposes.
DenseMatrix cholesky_solve_right(const CholeskyFactor& c, const DenseMatrix& r);

// Largest eigenvalue of a symmetric PSD matrix by power iteration from the
// normalized all-ones vector.
double spectral_norm(const DenseMatrix& m);

DenseMatrix pos_part(DenseMatrix m);

DenseMatrix sparse_dense_mul(const SparseSymMatrix& a, const DenseMatrix& d);

DenseMatrix transpose(const DenseMatrix& m);
DenseMatrix matmul(const DenseMatrix& lhs, const DenseMatrix& rhs);
// lhs^T * rhs without materializing the transpose.
DenseMatrix matmul_tn(const DenseMatrix& lhs, const DenseMatrix& rhs);
// m^T * m, exploiting symmetry.
DenseMatrix gram(const DenseMatrix& m);
// lhs * rhs^T.
DenseMatrix matmul_nt(const DenseMatrix& lhs, const DenseMatrix& rhs);

double frobenius_norm(const DenseMatrix& m);
double frobenius_norm_squared(const DenseMatrix& m);
double frobenius_distance(const DenseMatrix& a, const DenseMatrix& b);
// <a, b> = trace(a^T b).
double inner(const DenseMatrix& a, const DenseMatrix& b);
void add_to_diagonal(DenseMatrix& m, double shift);

// ||cur - prev||_F / ||prev||_F with the zero-denominator rule: 0 when the two
// iterates agree, +inf otherwise.
double relative_change(const DenseMatrix& cur, const DenseMatrix& prev);

// ||A - L R^T||_F^2 expanded as ||A||^2 - 2 tr(L^T A R) + tr((L^T L)(R^T R)),
// never forming the n x n product. a_norm_sq is ||A||_F^2.
double factorization_residual_squared(const SparseSymMatrix& a, double a_norm_sq,
                                      const DenseMatrix& l, const DenseMatrix& r);

}  // namespace snmf

#endif  // SNMF_LINALG_HPP
