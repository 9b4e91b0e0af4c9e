#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace elliptope {

inline constexpr double kUnitTolerance = 1e-12;   // row norms, diagonal entries
inline constexpr double kRoundTripTolerance = 1e-10;
inline constexpr double kPivotTolerance = 1e-14;  // operational positive definiteness

// Thrown when a Cholesky pivot is not positive; carries the offending
// row/column index in the original matrix indexing (0-based).
class FactorizationError : public std::runtime_error {
 public:
  FactorizationError(int pivot_index, double pivot_value)
      : std::runtime_error("matrix is not positive definite: pivot " +
                           std::to_string(pivot_index) + " = " +
                           std::to_string(pivot_value)),
        pivot_index_(pivot_index) {}

  int pivot_index() const noexcept { return pivot_index_; }

 private:
  int pivot_index_;
};

// Unit vector with strictly positive first coordinate. Row i of an upper
// Cholesky factor lives on this hemisphere with ambient dimension p - i + 1.
struct HemisphereVector {
  std::vector<double> coords;

  int ambient_dim() const noexcept { return static_cast<int>(coords.size()); }

  void validate(double tol = kUnitTolerance) const {
    if (coords.empty()) throw std::invalid_argument("HemisphereVector: empty");
    if (!(coords[0] > 0.0))
      throw std::invalid_argument("HemisphereVector: first coordinate must be positive");
    double sq = 0.0;
    for (double c : coords) sq += c * c;
    if (std::fabs(std::sqrt(sq) - 1.0) > tol)
      throw std::invalid_argument("HemisphereVector: norm out of tolerance");
  }
};

// Symmetric positive-definite matrix with unit diagonal. Storage is dense
// row-major and kept exactly symmetric: set() writes both mirror entries.
class CorrelationMatrix {
 public:
  explicit CorrelationMatrix(int dim) : dim_(dim), entries_(std::size_t(dim) * dim, 0.0) {
    if (dim < 1) throw std::invalid_argument("CorrelationMatrix: dim must be >= 1");
    for (int i = 0; i < dim; ++i) entries_[idx(i, i)] = 1.0;
  }

  // Builds from a row-major buffer; the buffer must be exactly symmetric
  // with unit diagonal (as produced by this library's writers).
  static CorrelationMatrix from_entries(int dim, std::vector<double> entries) {
    if (dim < 1) throw std::invalid_argument("CorrelationMatrix: dim must be >= 1");
    if (entries.size() != std::size_t(dim) * dim)
      throw std::invalid_argument("CorrelationMatrix: entry count does not match dim");
    CorrelationMatrix m(dim);
    m.entries_ = std::move(entries);
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j)
        if (m.entries_[m.idx(i, j)] != m.entries_[m.idx(j, i)])
          throw std::invalid_argument("CorrelationMatrix: entries not symmetric");
    return m;
  }

  int dim() const noexcept { return dim_; }

  double operator()(int i, int j) const noexcept { return entries_[idx(i, j)]; }

  void set(int i, int j, double value) noexcept {
    entries_[idx(i, j)] = value;
    entries_[idx(j, i)] = value;
  }

  const std::vector<double>& entries() const noexcept { return entries_; }

  // Checks every type invariant; throws with a description on violation.
  // Positive definiteness is the operational criterion: all Cholesky
  // pivots must exceed kPivotTolerance.
  void validate() const;

 private:
  std::size_t idx(int i, int j) const noexcept {
    return std::size_t(i) * dim_ + j;
  }

  int dim_;
  std::vector<double> entries_;
};

// Upper-triangular factor with unit-norm rows and positive diagonal,
// R = U U^t. Row i (0-based) stores only its dim - i trailing entries;
// the first stored entry of each row is the diagonal element.
class UpperCholeskyFactor {
 public:
  explicit UpperCholeskyFactor(int dim)
      : dim_(dim), data_(std::size_t(dim) * (dim + 1) / 2, 0.0) {
    if (dim < 1) throw std::invalid_argument("UpperCholeskyFactor: dim must be >= 1");
    for (int i = 0; i < dim; ++i) row(i)[0] = 1.0;
  }

  int dim() const noexcept { return dim_; }

  int row_length(int i) const noexcept { return dim_ - i; }

  std::span<double> row(int i) noexcept {
    return {data_.data() + offset(i), std::size_t(row_length(i))};
  }

  std::span<const double> row(int i) const noexcept {
    return {data_.data() + offset(i), std::size_t(row_length(i))};
  }

  double diagonal(int i) const noexcept { return row(i)[0]; }

  void validate(double tol = kUnitTolerance) const {
    for (int i = 0; i < dim_; ++i) {
      const auto r = row(i);
      if (!(r[0] > 0.0))
        throw std::invalid_argument("UpperCholeskyFactor: diagonal entry " +
                                    std::to_string(i) + " not positive");
      double sq = 0.0;
      for (double v : r) sq += v * v;
      if (std::fabs(std::sqrt(sq) - 1.0) > tol)
        throw std::invalid_argument("UpperCholeskyFactor: row " + std::to_string(i) +
                                    " norm out of tolerance");
    }
    if (row(dim_ - 1)[0] != 1.0)
      throw std::invalid_argument("UpperCholeskyFactor: last row must be exactly {1}");
  }

 private:
  std::size_t offset(int i) const noexcept {
    return std::size_t(i) * dim_ - std::size_t(i) * (i - 1) / 2;
  }

  int dim_;
  std::vector<double> data_;
};

// R = U U^t. Off-diagonals come from overlapping row tails; the diagonal is
// pinned to exactly 1 (rows are unit within kUnitTolerance, enforced here).
inline CorrelationMatrix build_correlation(const UpperCholeskyFactor& factor) {
  factor.validate();
  const int p = factor.dim();
  CorrelationMatrix result(p);
  for (int i = 0; i < p; ++i) {
    const auto ri = factor.row(i);
    for (int j = i + 1; j < p; ++j) {
      const auto rj = factor.row(j);
      // columns j..p-1 overlap: entry k of rj is column j + k
      double dot = 0.0;
      for (int k = 0; k < factor.row_length(j); ++k) dot += ri[(j - i) + k] * rj[k];
      result.set(i, j, dot);
    }
  }
  return result;
}

namespace detail {

// Lower Cholesky pivots of the index-reversed matrix. Returns the 0-based
// original index of the first non-positive pivot, or -1 when positive
// definite. When `factor_out` is given, fills it with the upper factor.
inline int reversed_cholesky(const CorrelationMatrix& matrix,
                             UpperCholeskyFactor* factor_out,
                             double* failing_pivot = nullptr) {
  const int p = matrix.dim();
  std::vector<double> lower(std::size_t(p) * p, 0.0);
  auto at = [&](int a, int b) -> double& { return lower[std::size_t(a) * p + b]; };
  for (int a = 0; a < p; ++a) {
    for (int b = 0; b <= a; ++b) {
      // reversed-index entry: B[a][b] = R[p-1-a][p-1-b]
      double sum = matrix(p - 1 - a, p - 1 - b);
      for (int k = 0; k < b; ++k) sum -= at(a, k) * at(b, k);
      if (a == b) {
        if (!(sum > kPivotTolerance)) {
          if (failing_pivot) *failing_pivot = sum;
          return p - 1 - a;
        }
        at(a, a) = std::sqrt(sum);
      } else {
        at(a, b) = sum / at(b, b);
      }
    }
  }
  if (factor_out) {
    UpperCholeskyFactor u(p);
    for (int i = 0; i < p; ++i) {
      auto row = u.row(i);
      for (int j = i; j < p; ++j) row[j - i] = at(p - 1 - i, p - 1 - j);
    }
    // row p-1 is (u_pp) = sqrt(R_pp); snap to the exact unit vector
    u.row(p - 1)[0] = 1.0;
    *factor_out = std::move(u);
  }
  return -1;
}

}  // namespace detail

// Unique upper Cholesky factor of a correlation matrix, computed by running
// the standard lower factorization on the index-reversed matrix.
inline UpperCholeskyFactor factor_correlation(const CorrelationMatrix& matrix) {
  UpperCholeskyFactor factor(matrix.dim());
  double pivot = 0.0;
  const int failed = detail::reversed_cholesky(matrix, &factor, &pivot);
  if (failed >= 0) throw FactorizationError(failed, pivot);
  return factor;
}

inline bool is_positive_definite(const CorrelationMatrix& matrix) {
  return detail::reversed_cholesky(matrix, nullptr) < 0;
}

inline void CorrelationMatrix::validate() const {
  for (int i = 0; i < dim_; ++i) {
    if (std::fabs(entries_[idx(i, i)] - 1.0) > kUnitTolerance)
      throw std::invalid_argument("CorrelationMatrix: diagonal entry " +
                                  std::to_string(i) + " not 1");
    for (int j = i + 1; j < dim_; ++j) {
      const double v = entries_[idx(i, j)];
      if (v != entries_[idx(j, i)])
        throw std::invalid_argument("CorrelationMatrix: entries not symmetric");
      if (!(v > -1.0 && v < 1.0))
        throw std::invalid_argument("CorrelationMatrix: off-diagonal entry (" +
                                    std::to_string(i) + "," + std::to_string(j) +
                                    ") outside (-1,1)");
    }
  }
  double pivot = 0.0;
  const int failed = detail::reversed_cholesky(*this, nullptr, &pivot);
  if (failed >= 0) throw FactorizationError(failed, pivot);
}

// log det(J Phi(U)) = p ln 2 + sum_{i=1}^{p-1} i ln u_ii (1-based i).
// Computed in log space; the direct product underflows at large dimension.
inline double log_jacobian(const UpperCholeskyFactor& factor) {
  const int p = factor.dim();
  double acc = p * std::log(2.0);
  for (int i = 0; i < p - 1; ++i) acc += double(i + 1) * std::log(factor.diagonal(i));
  return acc;
}

}  // namespace elliptope
