#include "snmf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace snmf {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::InvalidMatrix: return "InvalidMatrix";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::DegenerateScale: return "DegenerateScale";
    case ErrorCode::IsolatedVertex: return "IsolatedVertex";
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::RaggedRows: return "RaggedRows";
    case ErrorCode::AsymmetricConflict: return "AsymmetricConflict";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* where) {
  if (!a.same_shape(b)) {
    throw Error(ErrorCode::DimensionMismatch, std::string(where) + ": " + std::to_string(a.rows()) +
                                                  "x" + std::to_string(a.cols()) + " vs " +
                                                  std::to_string(b.rows()) + "x" +
                                                  std::to_string(b.cols()));
  }
}

// Four partial sums so long reductions are not bound by add latency.
double dot(std::span<const double> a, std::span<const double> b) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  const std::size_t n = a.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (; i < n; ++i) s0 += a[i] * b[i];
  return (s0 + s1) + (s2 + s3);
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  const std::size_t n = a.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const double d0 = a[i] - b[i], d1 = a[i + 1] - b[i + 1];
    const double d2 = a[i + 2] - b[i + 2], d3 = a[i + 3] - b[i + 3];
    s0 += d0 * d0;
    s1 += d1 * d1;
    s2 += d2 * d2;
    s3 += d3 * d3;
  }
  for (; i < n; ++i) s0 += (a[i] - b[i]) * (a[i] - b[i]);
  return (s0 + s1) + (s2 + s3);
}

}  // namespace

// ---------------------------------------------------------------------------
// DenseMatrix
// ---------------------------------------------------------------------------

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorCode::DimensionMismatch, "entry count does not match rows*cols");
  }
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw Error(ErrorCode::DimensionMismatch, "ragged matrix literal");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

bool DenseMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
  require_same_shape(*this, other, "operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
  require_same_shape(*this, other, "operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

DenseMatrix operator+(DenseMatrix lhs, const DenseMatrix& rhs) {
  lhs += rhs;
  return lhs;
}

DenseMatrix operator-(DenseMatrix lhs, const DenseMatrix& rhs) {
  lhs -= rhs;
  return lhs;
}

DenseMatrix operator*(DenseMatrix m, double s) {
  m *= s;
  return m;
}

DenseMatrix operator*(double s, DenseMatrix m) {
  m *= s;
  return m;
}

// ---------------------------------------------------------------------------
// SparseSymMatrix
// ---------------------------------------------------------------------------

SparseSymMatrix::SparseSymMatrix(std::size_t order, std::vector<std::size_t> row_offsets,
                                 std::vector<std::size_t> col_indices, std::vector<double> values)
    : order_(order),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
  if (row_offsets_.size() != order_ + 1 || row_offsets_.front() != 0 ||
      row_offsets_.back() != col_indices_.size() || col_indices_.size() != values_.size()) {
    throw Error(ErrorCode::InvalidMatrix, "inconsistent CSR arrays");
  }
  for (std::size_t r = 0; r < order_; ++r) {
    if (row_offsets_[r] > row_offsets_[r + 1]) {
      throw Error(ErrorCode::InvalidMatrix, "row offsets decrease at row " + std::to_string(r));
    }
    for (std::size_t p = row_offsets_[r]; p < row_offsets_[r + 1]; ++p) {
      if (col_indices_[p] >= order_) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "column index out of range in row " + std::to_string(r));
      }
      if (p > row_offsets_[r] && col_indices_[p] <= col_indices_[p - 1]) {
        throw Error(ErrorCode::InvalidMatrix,
                    "column indices not strictly increasing in row " + std::to_string(r));
      }
      if (!std::isfinite(values_[p])) {
        throw Error(ErrorCode::NonFinite, "non-finite value in row " + std::to_string(r));
      }
      if (values_[p] < 0.0) {
        throw Error(ErrorCode::NegativeWeight, "negative value in row " + std::to_string(r));
      }
    }
  }
  for (std::size_t r = 0; r < order_; ++r) {
    for (std::size_t p = row_offsets_[r]; p < row_offsets_[r + 1]; ++p) {
      if (at(col_indices_[p], r) != values_[p]) {
        throw Error(ErrorCode::InvalidMatrix, "matrix is not symmetric at (" + std::to_string(r) +
                                                  ", " + std::to_string(col_indices_[p]) + ")");
      }
    }
  }
}

SparseSymMatrix SparseSymMatrix::from_triplets(std::size_t order, std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    if (t.row >= order || t.col >= order) {
      throw Error(ErrorCode::IndexOutOfRange, "triplet index out of range");
    }
  }
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<std::size_t> offsets(order + 1, 0);
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  cols.reserve(triplets.size());
  vals.reserve(triplets.size());
  std::size_t last_row = 0;
  for (const auto& t : triplets) {
    if (!cols.empty() && t.row == last_row && cols.back() == t.col) {
      vals.back() += t.value;
      continue;
    }
    cols.push_back(t.col);
    vals.push_back(t.value);
    offsets[t.row + 1]++;
    last_row = t.row;
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  return SparseSymMatrix(order, std::move(offsets), std::move(cols), std::move(vals));
}

SparseSymMatrix SparseSymMatrix::from_dense(const DenseMatrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "from_dense requires a square matrix");
  }
  std::vector<Triplet> triplets;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j) != 0.0) triplets.push_back({i, j, m(i, j)});
    }
  }
  return from_triplets(m.rows(), std::move(triplets));
}

SparseSymMatrix SparseSymMatrix::identity(std::size_t order) {
  std::vector<std::size_t> offsets(order + 1);
  std::vector<std::size_t> cols(order);
  std::iota(offsets.begin(), offsets.end(), std::size_t{0});
  std::iota(cols.begin(), cols.end(), std::size_t{0});
  return SparseSymMatrix(order, std::move(offsets), std::move(cols),
                         std::vector<double>(order, 1.0));
}

double SparseSymMatrix::at(std::size_t r, std::size_t c) const {
  const auto cols = row_cols(r);
  const auto it = std::lower_bound(cols.begin(), cols.end(), c);
  if (it == cols.end() || *it != c) return 0.0;
  return values_[row_offsets_[r] + static_cast<std::size_t>(it - cols.begin())];
}

double SparseSymMatrix::frobenius_norm_squared() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return s;
}

double SparseSymMatrix::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

DenseMatrix SparseSymMatrix::to_dense() const {
  DenseMatrix d(order_, order_);
  for (std::size_t r = 0; r < order_; ++r) {
    for (std::size_t p = row_offsets_[r]; p < row_offsets_[r + 1]; ++p) {
      d(r, col_indices_[p]) = values_[p];
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Cholesky
// ---------------------------------------------------------------------------

CholeskyFactor cholesky_factor(const DenseMatrix& m) {
  const std::size_t n = m.rows();
  if (m.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "cholesky_factor requires a square matrix");
  }
  double scale = 0.0;
  for (double v : m.values()) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale) {
        throw Error(ErrorCode::InvalidMatrix, "cholesky_factor requires a symmetric matrix");
      }
    }
  }

  DenseMatrix c(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = m(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= c(j, k) * c(j, k);
    if (!(d > 0.0)) {
      throw Error(ErrorCode::NotPositiveDefinite,
                  "non-positive pivot at column " + std::to_string(j));
    }
    const double cjj = std::sqrt(d);
    c(j, j) = cjj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= c(i, k) * c(j, k);
      c(i, j) = s / cjj;
    }
  }
  return CholeskyFactor(std::move(c));
}

namespace {

// In place: x <- (C C^T)^{-1} x for a single right-hand side.
void solve_in_place(const DenseMatrix& c, std::span<double> x) {
  const std::size_t n = c.rows();
  for (std::size_t i = 0; i < n; ++i) {
    double s = x[i];
    for (std::size_t k = 0; k < i; ++k) s -= c(i, k) * x[k];
    x[i] = s / c(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= c(k, i) * x[k];
    x[i] = s / c(i, i);
  }
}

}  // namespace

DenseMatrix cholesky_solve(const CholeskyFactor& c, const DenseMatrix& b) {
  if (c.order() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "cholesky_solve: factor order " +
                                                  std::to_string(c.order()) + " vs rhs rows " +
                                                  std::to_string(b.rows()));
  }
  DenseMatrix s(b.rows(), b.cols());
  std::vector<double> column(b.rows());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t i = 0; i < b.rows(); ++i) column[i] = b(i, j);
    solve_in_place(c.lower(), column);
    for (std::size_t i = 0; i < b.rows(); ++i) s(i, j) = column[i];
  }
  return s;
}

DenseMatrix cholesky_solve_right(const CholeskyFactor& c, const DenseMatrix& r) {
  if (c.order() != r.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "cholesky_solve_right: factor order " +
                                                  std::to_string(c.order()) + " vs rhs cols " +
                                                  std::to_string(r.cols()));
  }
  // M symmetric, so S^T solves M S^T = R^T. Working on R^T turns both
  // triangular sweeps into row axpys over all n right-hand sides at once.
  const DenseMatrix& lo = c.lower();
  const std::size_t k = lo.rows();
  DenseMatrix t = transpose(r);
  for (std::size_t i = 0; i < k; ++i) {
    auto ti = t.row(i);
    for (std::size_t j = 0; j < i; ++j) {
      const double f = lo(i, j);
      const auto tj = t.row(j);
      for (std::size_t col = 0; col < ti.size(); ++col) ti[col] -= f * tj[col];
    }
    const double inv = 1.0 / lo(i, i);
    for (double& v : ti) v *= inv;
  }
  for (std::size_t i = k; i-- > 0;) {
    auto ti = t.row(i);
    for (std::size_t j = i + 1; j < k; ++j) {
      const double f = lo(j, i);
      const auto tj = t.row(j);
      for (std::size_t col = 0; col < ti.size(); ++col) ti[col] -= f * tj[col];
    }
    const double inv = 1.0 / lo(i, i);
    for (double& v : ti) v *= inv;
  }
  return transpose(t);
}

// ---------------------------------------------------------------------------
// Power iteration
// ---------------------------------------------------------------------------

namespace {

constexpr int kPowerIterationCap = 10000;
constexpr double kPowerIterationTol = 1e-14;

void sym_matvec(const DenseMatrix& m, std::span<const double> v, std::span<double> out) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    const auto r = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) s += r[j] * v[j];
    out[i] = s;
  }
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

double spectral_norm(const DenseMatrix& m) {
  const std::size_t n = m.rows();
  if (m.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "spectral_norm requires a square matrix");
  }
  if (n == 0) return 0.0;
  if (!m.all_finite()) throw Error(ErrorCode::NonFinite, "spectral_norm input");

  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> w(n);

  sym_matvec(m, v, w);
  double w_norm = norm2(w);
  if (w_norm == 0.0) {
    // All-ones lies in the null space. Restart from the largest diagonal
    // entry's basis vector; a PSD matrix with zero diagonal is zero.
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (m(i, i) > m(best, best)) best = i;
    }
    if (m(best, best) <= 0.0) return 0.0;
    std::fill(v.begin(), v.end(), 0.0);
    v[best] = 1.0;
    sym_matvec(m, v, w);
    w_norm = norm2(w);
  }

  double lambda = std::inner_product(v.begin(), v.end(), w.begin(), 0.0);
  for (int it = 0; it < kPowerIterationCap; ++it) {
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / w_norm;
    sym_matvec(m, v, w);
    w_norm = norm2(w);
    const double next = std::inner_product(v.begin(), v.end(), w.begin(), 0.0);
    if (!std::isfinite(next) || !std::isfinite(w_norm)) {
      throw Error(ErrorCode::NonFinite, "power iteration diverged");
    }
    const bool done = std::abs(next - lambda) <= kPowerIterationTol * std::abs(next);
    lambda = next;
    if (done || w_norm == 0.0) break;
  }
  return lambda;
}

// ---------------------------------------------------------------------------
// Elementwise and product kernels
// ---------------------------------------------------------------------------

DenseMatrix pos_part(DenseMatrix m) {
  for (double& v : m.values()) v = v > 0.0 ? v : 0.0;
  return m;
}

DenseMatrix sparse_dense_mul(const SparseSymMatrix& a, const DenseMatrix& d) {
  if (a.order() != d.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "sparse_dense_mul: order " +
                                                  std::to_string(a.order()) + " vs rows " +
                                                  std::to_string(d.rows()));
  }
  const std::size_t k = d.cols();
  DenseMatrix out(a.order(), k);
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  for (std::size_t i = 0; i < a.order(); ++i) {
    auto out_row = out.row(i);
    for (std::size_t p = offsets[i]; p < offsets[i + 1]; ++p) {
      const double w = vals[p];
      const auto src = d.row(cols[p]);
      for (std::size_t c = 0; c < k; ++c) out_row[c] += w * src[c];
    }
  }
  return out;
}

DenseMatrix transpose(const DenseMatrix& m) {
  DenseMatrix t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  }
  return t;
}

DenseMatrix matmul(const DenseMatrix& lhs, const DenseMatrix& rhs) {
  if (lhs.cols() != rhs.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "matmul inner dimensions differ");
  }
  DenseMatrix out(lhs.rows(), rhs.cols());
  for (std::size_t i = 0; i < lhs.rows(); ++i) {
    auto out_row = out.row(i);
    for (std::size_t k = 0; k < lhs.cols(); ++k) {
      const double a = lhs(i, k);
      if (a == 0.0) continue;
      const auto r = rhs.row(k);
      for (std::size_t j = 0; j < rhs.cols(); ++j) out_row[j] += a * r[j];
    }
  }
  return out;
}

DenseMatrix matmul_tn(const DenseMatrix& lhs, const DenseMatrix& rhs) {
  if (lhs.rows() != rhs.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "matmul_tn row counts differ");
  }
  DenseMatrix out(lhs.cols(), rhs.cols());
  for (std::size_t r = 0; r < lhs.rows(); ++r) {
    const auto a = lhs.row(r);
    const auto b = rhs.row(r);
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double ai = a[i];
      auto out_row = out.row(i);
      for (std::size_t j = 0; j < b.size(); ++j) out_row[j] += ai * b[j];
    }
  }
  return out;
}

DenseMatrix gram(const DenseMatrix& m) {
  // Column dot products over the transpose: K(K+1)/2 contiguous length-n sums.
  const std::size_t k = m.cols();
  const DenseMatrix t = transpose(m);
  DenseMatrix g(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto ci = t.row(i);
    for (std::size_t j = i; j < k; ++j) {
      const auto cj = t.row(j);
      const double v = dot(ci, cj);
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return g;
}

DenseMatrix matmul_nt(const DenseMatrix& lhs, const DenseMatrix& rhs) {
  if (lhs.cols() != rhs.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matmul_nt column counts differ");
  }
  DenseMatrix out(lhs.rows(), rhs.rows());
  for (std::size_t i = 0; i < lhs.rows(); ++i) {
    const auto a = lhs.row(i);
    for (std::size_t j = 0; j < rhs.rows(); ++j) {
      out(i, j) = dot(a, rhs.row(j));
    }
  }
  return out;
}

double frobenius_norm_squared(const DenseMatrix& m) { return dot(m.values(), m.values()); }

double frobenius_norm(const DenseMatrix& m) { return std::sqrt(frobenius_norm_squared(m)); }

double frobenius_distance(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "frobenius_distance");
  return std::sqrt(squared_distance(a.values(), b.values()));
}

double inner(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "inner");
  return dot(a.values(), b.values());
}

void add_to_diagonal(DenseMatrix& m, double shift) {
  const std::size_t n = std::min(m.rows(), m.cols());
  for (std::size_t i = 0; i < n; ++i) m(i, i) += shift;
}

double relative_change(const DenseMatrix& cur, const DenseMatrix& prev) {
  const double num = frobenius_distance(cur, prev);
  const double den = frobenius_norm(prev);
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

double factorization_residual_squared(const SparseSymMatrix& a, double a_norm_sq,
                                      const DenseMatrix& l, const DenseMatrix& r) {
  if (!l.same_shape(r) || l.rows() != a.order()) {
    throw Error(ErrorCode::DimensionMismatch, "factorization_residual_squared: shapes differ");
  }
  // <L, A R> summed over the stored entries of A, without forming A R.
  const std::size_t k = l.cols();
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  std::vector<double> ar(k);
  double cross = 0.0;
  for (std::size_t i = 0; i < a.order(); ++i) {
    std::fill(ar.begin(), ar.end(), 0.0);
    for (std::size_t p = offsets[i]; p < offsets[i + 1]; ++p) {
      const double w = vals[p];
      const auto rj = r.row(cols[p]);
      for (std::size_t c = 0; c < k; ++c) ar[c] += w * rj[c];
    }
    cross += dot(l.row(i), ar);
  }
  const double quad = inner(gram(l), gram(r));
  return std::max(0.0, a_norm_sq - 2.0 * cross + quad);
}

}  // namespace snmf
