#pragma once

#include "nq1/poly.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace nq1 {

template <class R>
R ring_one();
template <>
inline Scalar ring_one<Scalar>() { return Scalar(1); }
template <>
inline Poly ring_one<Poly>() { return Poly(0, Scalar(1)); }

/// Dense row-major matrix over an exact integral domain (Scalar or Poly).
template <class R>
class Matrix {
public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = ring_one<R>();
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  R& operator()(int i, int j) { return data_[std::size_t(i) * cols_ + j]; }
  const R& operator()(int i, int j) const { return data_[std::size_t(i) * cols_ + j]; }

  void swap_rows(int a, int b) {
    if (a == b) return;
    for (int j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }

  bool operator==(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (std::size_t k = 0; k < data_.size(); ++k) {
      if (!(data_[k] == o.data_[k])) return false;
    }
    return true;
  }

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<R> data_;
};

using QMatrix = Matrix<Scalar>;
using PolyMatrix = Matrix<Poly>;

inline bool ring_is_zero(const Scalar& a) { return a == 0; }
inline bool ring_is_zero(const Poly& a) { return a.is_zero(); }

inline Scalar ring_exact_div(const Scalar& a, const Scalar& b) { return a / b; }
inline Poly ring_exact_div(const Poly& a, const Poly& b) {
  auto q = a.divide_exact(b);
  if (!q) throw InternalError("fraction-free elimination: inexact division");
  return *q;
}

/// Lower is a better pivot. Constants first, then short polynomials.
inline std::size_t pivot_cost(const Scalar&) { return 0; }
inline std::size_t pivot_cost(const Poly& p) {
  if (p.is_constant()) return 0;
  return 1 + p.terms().size() * 16 + std::size_t(p.total_degree());
}

/// Result of fraction-free Gauss-Jordan elimination. Every pivot row t
/// has the common value `det` at column pivot_cols[t] and zeros in the
/// other pivot columns; entries are minors of the input, so no fractions
/// ever appear.
template <class R>
struct Elimination {
  Matrix<R> reduced;
  std::vector<int> pivot_cols;
  R det = ring_one<R>();

  int rank() const { return static_cast<int>(pivot_cols.size()); }
};

/// Bareiss-style Gauss-Jordan. Pivots are searched only in the first
/// `pivot_limit` columns (the remaining columns are carried along, e.g.
/// right-hand sides). Row swaps may flip the sign of `det` relative to
/// the determinant; ratios entry/det are unaffected.
template <class R>
Elimination<R> eliminate(Matrix<R> a, int pivot_limit = -1) {
  if (pivot_limit < 0) pivot_limit = a.cols();
  Elimination<R> out;
  R prev = ring_one<R>();
  int r = 0;
  for (int col = 0; col < pivot_limit && r < a.rows(); ++col) {
    int best = -1;
    std::size_t best_cost = 0;
    for (int i = r; i < a.rows(); ++i) {
      if (ring_is_zero(a(i, col))) continue;
      std::size_t c = pivot_cost(a(i, col));
      if (best < 0 || c < best_cost) {
        best = i;
        best_cost = c;
      }
    }
    if (best < 0) continue;
    a.swap_rows(r, best);
    const R p = a(r, col);
    for (int i = 0; i < a.rows(); ++i) {
      if (i == r) continue;
      const R f = a(i, col);
      for (int j = 0; j < a.cols(); ++j) {
        if (ring_is_zero(f)) {
          if (!ring_is_zero(a(i, j))) a(i, j) = ring_exact_div(R(p * a(i, j)), prev);
        } else {
          a(i, j) = ring_exact_div(R(p * a(i, j) - f * a(r, j)), prev);
        }
      }
    }
    prev = p;
    out.pivot_cols.push_back(col);
    ++r;
  }
  out.det = prev;
  out.reduced = std::move(a);
  return out;
}

template <class R>
int rank(const Matrix<R>& a) {
  return eliminate(a).rank();
}

/// Solution of A x = b over the fraction field: x = numerators / denominator.
/// Free variables are set to zero.
template <class R>
struct FractionSolution {
  std::vector<R> numerators;
  R denominator = ring_one<R>();
};

/// Solves A X = B column by column; nullopt if some column is inconsistent.
template <class R>
std::optional<std::vector<FractionSolution<R>>> solve(const Matrix<R>& a, const Matrix<R>& b) {
  if (a.rows() != b.rows()) throw Error("solve: row mismatch");
  Matrix<R> aug(a.rows(), a.cols() + b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    for (int j = 0; j < b.cols(); ++j) aug(i, a.cols() + j) = b(i, j);
  }
  auto e = eliminate(std::move(aug), a.cols());
  const int rk = e.rank();
  for (int i = rk; i < a.rows(); ++i) {
    for (int j = 0; j < b.cols(); ++j) {
      if (!ring_is_zero(e.reduced(i, a.cols() + j))) return std::nullopt;
    }
  }
  std::vector<FractionSolution<R>> out(b.cols());
  for (int j = 0; j < b.cols(); ++j) {
    out[j].numerators.assign(a.cols(), R{});
    out[j].denominator = e.det;
    for (int t = 0; t < rk; ++t) out[j].numerators[e.pivot_cols[t]] = e.reduced(t, a.cols() + j);
  }
  return out;
}

/// Kernel basis over Q of a rational matrix, one vector per free column
/// (the free coordinate set to 1).
std::vector<std::vector<Scalar>> kernel(const QMatrix& a);

/// Sparse row: column -> nonzero value.
using SparseRow = std::map<int, Scalar>;

/// Kernel of a sparse rational system (rows given as sparse maps over
/// `ncols` unknowns). Same normalization as `kernel`: one vector per free
/// column, in increasing column order, with that coordinate equal to 1.
std::vector<std::vector<Scalar>> sparse_kernel(int ncols, const std::vector<SparseRow>& rows);

/// Evaluates a polynomial matrix at a point.
QMatrix evaluate(const PolyMatrix& m, std::span<const Scalar> p);

/// Inverse of a square polynomial matrix whose determinant is a nonzero
/// constant; nullopt otherwise.
std::optional<PolyMatrix> polynomial_inverse(const PolyMatrix& m);

/// Adjugate-style inverse: returns (N, d) with m^{-1} = N / d. nullopt
/// when m is singular over the fraction field.
std::optional<std::pair<PolyMatrix, Poly>> fraction_inverse(const PolyMatrix& m);

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);

}  // namespace nq1
