#include "nq1/linalg.hpp"

namespace nq1 {

std::vector<std::vector<Scalar>> kernel(const QMatrix& a) {
  auto e = eliminate(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (int c : e.pivot_cols) is_pivot[c] = true;
  std::vector<std::vector<Scalar>> basis;
  for (int f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<Scalar> v(a.cols(), 0);
    v[f] = 1;
    for (int t = 0; t < e.rank(); ++t) v[e.pivot_cols[t]] = -e.reduced(t, f) / e.det;
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<std::vector<Scalar>> sparse_kernel(int ncols, const std::vector<SparseRow>& rows) {
  // Reduced row echelon form, built incrementally. pivots[c] is the row
  // whose leading column is c, normalized to leading coefficient 1.
  std::map<int, SparseRow> pivots;
  for (const SparseRow& input : rows) {
    SparseRow row = input;
    auto it = row.begin();
    while (it != row.end()) {
      if (it->second == 0) {
        it = row.erase(it);
        continue;
      }
      auto p = pivots.find(it->first);
      if (p == pivots.end()) {
        ++it;
        continue;
      }
      const int col = it->first;
      const Scalar f = it->second;
      for (const auto& [c, v] : p->second) row[c] -= f * v;
      it = row.erase(row.find(col));
    }
    if (row.empty()) continue;
    const int lead = row.begin()->first;
    const Scalar inv = 1 / row.begin()->second;
    for (auto& [c, v] : row) v *= inv;
    pivots.emplace(lead, std::move(row));
  }
  // Back substitution: clear each pivot column from the other pivot rows,
  // highest pivot first.
  for (auto p = pivots.rbegin(); p != pivots.rend(); ++p) {
    const int col = p->first;
    for (auto& [c, row] : pivots) {
      if (c >= col) break;
      auto it = row.find(col);
      if (it == row.end()) continue;
      const Scalar f = it->second;
      for (const auto& [cc, v] : p->second) {
        Scalar& dst = row[cc];
        dst -= f * v;
        if (dst == 0) row.erase(cc);
      }
    }
  }
  std::vector<std::vector<Scalar>> basis;
  for (int f = 0; f < ncols; ++f) {
    if (pivots.count(f)) continue;
    std::vector<Scalar> v(ncols, 0);
    v[f] = 1;
    for (const auto& [c, row] : pivots) {
      auto it = row.find(f);
      if (it != row.end()) v[c] = -it->second;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

QMatrix evaluate(const PolyMatrix& m, std::span<const Scalar> p) {
  QMatrix q(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) q(i, j) = m(i, j).evaluate(p);
  }
  return q;
}

std::optional<std::pair<PolyMatrix, Poly>> fraction_inverse(const PolyMatrix& m) {
  if (m.rows() != m.cols()) throw Error("inverse of a non-square matrix");
  const int n = m.rows();
  auto sol = solve(m, PolyMatrix::identity(n));
  if (!sol) return std::nullopt;
  auto probe = eliminate(m);
  if (probe.rank() < n) return std::nullopt;
  PolyMatrix num(n, n);
  Poly den = (*sol)[0].denominator;
  for (int j = 0; j < n; ++j) {
    if (!((*sol)[j].denominator == den)) throw InternalError("inconsistent denominators");
    for (int i = 0; i < n; ++i) num(i, j) = (*sol)[j].numerators[i];
  }
  return std::make_pair(std::move(num), std::move(den));
}

std::optional<PolyMatrix> polynomial_inverse(const PolyMatrix& m) {
  if (m.rows() == 0) return PolyMatrix(0, 0);
  auto inv = fraction_inverse(m);
  if (!inv) return std::nullopt;
  auto& [num, den] = *inv;
  if (!den.is_constant()) {
    // The numerators may still share the factor.
    for (int i = 0; i < num.rows(); ++i) {
      for (int j = 0; j < num.cols(); ++j) {
        auto q = num(i, j).divide_exact(den);
        if (!q) return std::nullopt;
        num(i, j) = *q;
      }
    }
    return num;
  }
  Scalar c = den.constant_term();
  for (int i = 0; i < num.rows(); ++i) {
    for (int j = 0; j < num.cols(); ++j) num(i, j) *= Scalar(1 / c);
  }
  return num;
}

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.cols() != b.rows()) throw Error("matrix product dimension mismatch");
  PolyMatrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < b.cols(); ++j) {
      Poly s;
      for (int k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = std::move(s);
    }
  }
  return c;
}

}  // namespace nq1
