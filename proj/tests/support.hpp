#pragma once

// Random generators and independent reference computations shared by the
// unit tests and the acceptance runner.

#include "nq1/commands.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace nq1::testing {

inline std::string corpus_text(const std::string& name) {
  std::ifstream in(std::string(NQ1_CORPUS_DIR) + "/" + name);
  if (!in) throw std::runtime_error("missing corpus file " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Document corpus(const std::string& name) { return parse_document(corpus_text(name)); }

using Rng = std::mt19937_64;

inline int uniform(Rng& g, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); }

inline Scalar small_rational(Rng& g) {
  int num = uniform(g, -5, 5);
  int den = uniform(g, 1, 3);
  Scalar c(num, den);
  c.canonicalize();
  return c;
}

inline Poly random_poly(Rng& g, int n, int max_deg, int max_terms) {
  Poly p(n);
  const int terms = uniform(g, 0, max_terms);
  for (int t = 0; t < terms; ++t) {
    Exponent e(n, 0);
    int budget = uniform(g, 0, max_deg);
    for (int k = 0; k < budget && n > 0; ++k) ++e[uniform(g, 0, n - 1)];
    p.add_term(e, small_rational(g));
  }
  return p;
}

inline Function random_function(Rng& g, Signature sig, int xi_degree, int max_deg = 2, int max_terms = 2) {
  Function f(sig);
  if (xi_degree < 0 || xi_degree > sig.rank) return f;
  for (const auto& m : odd_monomials_of_degree(sig.rank, xi_degree)) {
    if (uniform(g, 0, 2) == 0) continue;
    f.add_term(m, random_poly(g, sig.base, max_deg, max_terms));
  }
  return f;
}

/// Homogeneous field of degree d with polynomial coefficients.
inline VectorField random_field(Rng& g, Signature sig, int d, int max_deg = 2) {
  std::vector<Function> even, odd;
  for (int i = 0; i < sig.base; ++i) even.push_back(random_function(g, sig, d, max_deg));
  for (int a = 0; a < sig.rank; ++a) odd.push_back(random_function(g, sig, d + 1, max_deg));
  return VectorField(sig, std::move(even), std::move(odd));
}

inline Signature random_signature(Rng& g, int max_base = 3, int max_rank = 3) {
  return Signature{uniform(g, 0, max_base), uniform(g, 1, max_rank)};
}

// --- reference exterior algebra -------------------------------------------

/// Product of two odd monomials given as sorted index lists, by explicit
/// bubble sort of the concatenation. Returns sign (0 on repeats) and the
/// merged list.
inline std::pair<int, std::vector<int>> reference_wedge(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  int sign = 1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j + 1 < a.size() - i; ++j) {
      if (a[j] == a[j + 1]) return {0, {}};
      if (a[j] > a[j + 1]) {
        std::swap(a[j], a[j + 1]);
        sign = -sign;
      }
    }
  }
  for (std::size_t j = 0; j + 1 < a.size(); ++j) {
    if (a[j] == a[j + 1]) return {0, {}};
  }
  return {sign, a};
}

inline Function reference_product(const Function& f, const Function& h) {
  Function out(f.signature());
  for (const auto& [m1, p1] : f.terms()) {
    for (const auto& [m2, p2] : h.terms()) {
      auto [s, idx] = reference_wedge(m1.indices(), m2.indices());
      if (s == 0) continue;
      out.add_term(OddMonomial::from_indices(idx), Scalar(s) * (p1 * p2));
    }
  }
  return out;
}

// --- Lie algebras ------------------------------------------------------------

/// Structure constants c[i][j][k] of a Lie algebra of dimension d.
using Constants = std::vector<std::vector<std::vector<Scalar>>>;

inline Constants zero_constants(int d) {
  return Constants(d, std::vector<std::vector<Scalar>>(d, std::vector<Scalar>(d, Scalar(0))));
}

inline Constants su2_constants() {
  Constants c = zero_constants(3);
  auto set = [&](int i, int j, int k) {
    c[i][j][k] = 1;
    c[j][i][k] = -1;
  };
  set(0, 1, 2);
  set(1, 2, 0);
  set(2, 0, 1);
  return c;
}

inline Constants heisenberg_constants(int extra = 0) {
  Constants c = zero_constants(3 + extra);
  c[0][1][2] = 1;
  c[1][0][2] = -1;
  return c;
}

/// Dense rational matrix helpers for the reference computations.
using Dense = std::vector<std::vector<Scalar>>;

/// Solves A x = b (A square or tall with full column rank) by
/// Gauss-Jordan; returns false if inconsistent.
inline bool dense_solve(Dense a, std::vector<Scalar> b, std::vector<Scalar>& x) {
  const int rows = static_cast<int>(a.size());
  const int cols = rows ? static_cast<int>(a[0].size()) : 0;
  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    std::swap(b[p], b[r]);
    const Scalar inv = 1 / a[r][c];
    for (auto& v : a[r]) v *= inv;
    b[r] *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Scalar f = a[i][c];
      for (int k = 0; k < cols; ++k) a[i][k] -= f * a[r][k];
      b[i] -= f * b[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (int i = r; i < rows; ++i) {
    if (b[i] != 0) return false;
  }
  x.assign(cols, Scalar(0));
  for (int i = 0; i < r; ++i) x[pivot_col[i]] = b[i];
  return true;
}

inline Dense dense_inverse(const Dense& m) {
  const int n = static_cast<int>(m.size());
  Dense inv(n, std::vector<Scalar>(n));
  for (int j = 0; j < n; ++j) {
    std::vector<Scalar> e(n, Scalar(0)), x;
    e[j] = 1;
    dense_solve(m, e, x);
    for (int i = 0; i < n; ++i) inv[i][j] = x[i];
  }
  return inv;
}

/// Random invertible integer matrix (product of elementary operations).
inline Dense random_gl(Rng& g, int n) {
  Dense m(n, std::vector<Scalar>(n, Scalar(0)));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  for (int step = 0; step < 2 * n; ++step) {
    if (n < 2) break;
    int i = uniform(g, 0, n - 1), j = uniform(g, 0, n - 1);
    if (i == j) continue;
    const int f = uniform(g, -2, 2);
    for (int k = 0; k < n; ++k) m[k][i] += f * m[k][j];  // column op
  }
  for (int i = 0; i < n; ++i) {
    if (uniform(g, 0, 3) == 0) {
      for (int k = 0; k < n; ++k) m[k][i] *= 2;
    }
  }
  return m;
}

/// Constants in the basis f_j = sum_i P(i, j) e_i.
inline Constants change_basis(const Constants& c, const Dense& p) {
  const int d = static_cast<int>(c.size());
  const Dense pinv = dense_inverse(p);
  Constants out = zero_constants(d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      std::vector<Scalar> v(d, Scalar(0));  // [f_a, f_b] in e-coordinates
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          const Scalar w = p[i][a] * p[j][b];
          if (w == 0) continue;
          for (int k = 0; k < d; ++k) v[k] += w * c[i][j][k];
        }
      }
      for (int k = 0; k < d; ++k) {
        for (int i = 0; i < d; ++i) out[a][b][k] += pinv[k][i] * v[i];
      }
    }
  }
  return out;
}

inline LieAlgebroidData lie_algebra(const Constants& c) {
  const int d = static_cast<int>(c.size());
  LieAlgebroidData a(0, d);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        if (c[i][j][k] != 0) a.set_structure(i, j, k, Poly(0, c[i][j][k]));
      }
    }
  }
  return a;
}

/// Quotient constants of g by the ideal spanned by the columns of `ideal`
/// (d x k), in the basis given by the first standard vectors completing
/// the ideal greedily, in index order.
struct ReferenceQuotient {
  std::vector<int> complement;
  Constants c;
};

inline ReferenceQuotient reference_quotient(const Constants& c, const Dense& ideal) {
  const int d = static_cast<int>(c.size());
  const int k = ideal.empty() ? 0 : static_cast<int>(ideal[0].size());
  ReferenceQuotient out;
  // Greedy completion: keep e_i when it increases the rank.
  std::vector<std::vector<Scalar>> span;
  for (int j = 0; j < k; ++j) {
    std::vector<Scalar> col(d);
    for (int i = 0; i < d; ++i) col[i] = ideal[i][j];
    span.push_back(col);
  }
  auto rank_of = [&](const std::vector<std::vector<Scalar>>& vs) {
    if (vs.empty()) return 0;
    Dense m(d, std::vector<Scalar>(vs.size()));
    for (std::size_t j = 0; j < vs.size(); ++j) {
      for (int i = 0; i < d; ++i) m[i][j] = vs[j][i];
    }
    int r = 0;
    const int cols = static_cast<int>(vs.size());
    for (int col = 0; col < cols && r < d; ++col) {
      int p = r;
      while (p < d && m[p][col] == 0) ++p;
      if (p == d) continue;
      std::swap(m[p], m[r]);
      for (int i = r + 1; i < d; ++i) {
        const Scalar f = m[i][col] / m[r][col];
        for (int q = col; q < cols; ++q) m[i][q] -= f * m[r][q];
      }
      ++r;
    }
    return r;
  };
  int current = rank_of(span);
  for (int i = 0; i < d; ++i) {
    std::vector<Scalar> e(d, Scalar(0));
    e[i] = 1;
    span.push_back(e);
    int r = rank_of(span);
    if (r > current) {
      current = r;
      out.complement.push_back(i);
    } else {
      span.pop_back();
    }
  }
  const int m = static_cast<int>(out.complement.size());
  // Basis matrix [complement | ideal].
  Dense basis(d, std::vector<Scalar>(m + k, Scalar(0)));
  for (int g = 0; g < m; ++g) basis[out.complement[g]][g] = 1;
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < d; ++i) basis[i][m + j] = ideal[i][j];
  }
  out.c = zero_constants(m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      std::vector<Scalar> v(d);
      for (int q = 0; q < d; ++q) v[q] = c[out.complement[a]][out.complement[b]][q];
      std::vector<Scalar> x;
      dense_solve(basis, v, x);
      for (int g = 0; g < m; ++g) out.c[a][b][g] = x[g];
    }
  }
  return out;
}

// --- algebroid families --------------------------------------------------------

/// Action algebroid of linear vector fields x -> A_i x on R^n. Constants
/// are chosen so that rho is a bracket morphism.
inline LieAlgebroidData linear_action(const std::vector<Dense>& mats) {
  const int r = static_cast<int>(mats.size());
  const int n = r ? static_cast<int>(mats[0].size()) : 0;
  LieAlgebroidData a(n, r);
  for (int i = 0; i < r; ++i) {
    for (int al = 0; al < n; ++al) {
      Poly p(n);
      for (int b = 0; b < n; ++b) {
        if (mats[i][al][b] != 0) p += mats[i][al][b] * Poly::variable(n, b);
      }
      a.set_anchor(i, al, p);
    }
  }
  // [V_A, V_B] = V_{[B, A]}; solve [A_j, A_i] = sum_k c_ij^k A_k.
  Dense sys(n * n, std::vector<Scalar>(r));
  for (int k = 0; k < r; ++k) {
    for (int p = 0; p < n; ++p) {
      for (int q = 0; q < n; ++q) sys[p * n + q][k] = mats[k][p][q];
    }
  }
  for (int i = 0; i < r; ++i) {
    for (int j = i + 1; j < r; ++j) {
      std::vector<Scalar> rhs(n * n, Scalar(0));
      for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
          for (int s = 0; s < n; ++s) rhs[p * n + q] += mats[j][p][s] * mats[i][s][q] - mats[i][p][s] * mats[j][s][q];
        }
      }
      std::vector<Scalar> x;
      if (!dense_solve(sys, rhs, x)) continue;  // not closed: leave c = 0
      for (int k = 0; k < r; ++k) {
        if (x[k] != 0) a.set_structure(i, j, k, Poly(n, x[k]));
      }
    }
  }
  return a;
}

inline LieAlgebroidData random_algebroid(Rng& g, int n, int r, int max_deg = 2) {
  LieAlgebroidData a(n, r);
  for (int i = 0; i < r; ++i) {
    for (int j = i + 1; j < r; ++j) {
      for (int k = 0; k < r; ++k) {
        if (uniform(g, 0, 2) == 0) a.set_structure(i, j, k, random_poly(g, n, max_deg, 2));
      }
    }
    for (int al = 0; al < n; ++al) {
      if (uniform(g, 0, 2) == 0) a.set_anchor(i, al, random_poly(g, n, max_deg, 2));
    }
  }
  return a;
}

/// Mixture of valid algebroids (Lie algebras in random bases, linear
/// actions, tangent bundles, rank one) and random or perturbed data.
inline LieAlgebroidData mixed_algebroid(Rng& g) {
  const int kind = uniform(g, 0, 6);
  switch (kind) {
    case 0: {
      const int pick = uniform(g, 0, 2);
      Constants c = pick == 0 ? su2_constants() : pick == 1 ? heisenberg_constants() : zero_constants(uniform(g, 1, 3));
      return lie_algebra(change_basis(c, random_gl(g, static_cast<int>(c.size()))));
    }
    case 1: {
      const int n = uniform(g, 1, 3);
      std::vector<Dense> mats;
      const int which = uniform(g, 0, 2);
      if (which == 0 && n >= 2) {
        // rotations in a coordinate plane and scaling
        Dense rot(n, std::vector<Scalar>(n, Scalar(0))), sc(n, std::vector<Scalar>(n, Scalar(0)));
        rot[0][1] = -1;
        rot[1][0] = 1;
        for (int i = 0; i < n; ++i) sc[i][i] = 1;
        mats = {rot, sc};
      } else if (which == 1 && n == 3) {
        Dense l1(3, std::vector<Scalar>(3, Scalar(0))), l2 = l1, l3 = l1;
        l1[1][2] = -1;
        l1[2][1] = 1;
        l2[2][0] = -1;
        l2[0][2] = 1;
        l3[0][1] = -1;
        l3[1][0] = 1;
        mats = {l1, l2, l3};
      } else {
        Dense u(n, std::vector<Scalar>(n, Scalar(0)));
        for (int i = 0; i < n; ++i) u[i][i] = uniform(g, -2, 2);
        mats = {u};
      }
      return linear_action(mats);
    }
    case 2: {
      const int n = uniform(g, 1, 3);
      LieAlgebroidData a(n, n);
      for (int i = 0; i < n; ++i) a.set_anchor(i, i, Poly(n, 1));
      return a;
    }
    case 3: {
      const int n = uniform(g, 0, 3);
      LieAlgebroidData a(n, 1);
      for (int al = 0; al < n; ++al) a.set_anchor(0, al, random_poly(g, n, 2, 2));
      return a;
    }
    case 4: {
      // valid data with one coefficient perturbed
      LieAlgebroidData a = lie_algebra(change_basis(su2_constants(), random_gl(g, 3)));
      const int i = uniform(g, 0, 1), j = uniform(g, i + 1, 2), k = uniform(g, 0, 2);
      a.set_structure(i, j, k, a.structure(i, j, k) + Poly(0, Scalar(uniform(g, 1, 2))));
      return a;
    }
    default:
      return random_algebroid(g, uniform(g, 0, 3), uniform(g, 1, 3));
  }
}

/// Homological fields used for d_Q^2 = 0 checks.
inline std::vector<VectorField> homological_pool() {
  std::vector<VectorField> out;
  Rng g(99);
  for (int n = 1; n <= 3; ++n) {
    LieAlgebroidData t(n, n);
    for (int i = 0; i < n; ++i) t.set_anchor(i, i, Poly(n, 1));
    out.push_back(build_q(t));
  }
  out.push_back(build_q(lie_algebra(su2_constants())));
  out.push_back(build_q(lie_algebra(change_basis(su2_constants(), random_gl(g, 3)))));
  out.push_back(build_q(lie_algebra(change_basis(heisenberg_constants(1), random_gl(g, 4)))));
  Dense l1(3, std::vector<Scalar>(3, Scalar(0))), l2 = l1, l3 = l1;
  l1[1][2] = -1;
  l1[2][1] = 1;
  l2[2][0] = -1;
  l2[0][2] = 1;
  l3[0][1] = -1;
  l3[1][0] = 1;
  out.push_back(build_q(linear_action({l1, l2, l3})));
  return out;
}

}  // namespace nq1::testing
