#include "nq1/reduction.hpp"

#include <algorithm>
#include <functional>
#include <tuple>

namespace nq1 {

const char* to_string(ReductionMode m) { return m == ReductionMode::point_body ? "point_body" : "adapted"; }

namespace {

Poly lift(int n, const Poly& p) {
  Poly q(n);
  q += p;
  return q;
}

PolyMatrix symbol_matrix(const Distribution& d) {
  const int n = d.sig.base;
  PolyMatrix s(n, static_cast<int>(d.gens_0.size()));
  for (std::size_t j = 0; j < d.gens_0.size(); ++j) {
    auto y = symbol(d.gens_0[j]);
    for (int i = 0; i < n; ++i) s(i, int(j)) = y[i];
  }
  return s;
}

std::vector<int> coordinate_fields_in(const PolyMatrix& f, int n, const std::vector<Point>& samples) {
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    std::vector<Poly> unit(n, Poly(n));
    unit[i] = Poly(n, 1);
    auto sol = solve_in_span(f, unit, samples);
    if (sol.solvable && sol.certainty == Certainty::exact) out.push_back(i);
  }
  return out;
}

std::vector<Exponent> exponents_up_to(int n, int k) {
  std::vector<Exponent> out;
  Exponent e(n, 0);
  // Enumerate all exponents of total degree <= k in graded order, larger first.
  for (int d = k; d >= 0; --d) {
    std::vector<Exponent> level;
    std::function<void(int, int)> rec = [&](int i, int left) {
      if (i == n - 1 || n == 0) {
        if (n > 0) e[i] = left;
        if (n > 0 || left == 0) level.push_back(e);
        return;
      }
      for (int v = left; v >= 0; --v) {
        e[i] = v;
        rec(i + 1, left - v);
      }
    };
    rec(0, d);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

PolyMatrix lifted_frame(const ClassicalTriple& t, const PolyMatrix& phi) {
  const int n = t.sig.base, r = t.sig.rank, k = t.B.cols(), m = t.quotient_rank();
  PolyMatrix p(r, r);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) p(i, j) = Poly(n);
  }
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < r; ++i) p(i, j) = lift(n, t.B(i, j));
  }
  for (int j = 0; j < m; ++j) {
    for (int g = 0; g < m; ++g) p(t.complement[g], k + j) += lift(n, phi(g, j));
  }
  return p;
}

}  // namespace

ReductionSetting detect_setting(const Distribution& d, ReductionSetting base) {
  if (d.sig.base == 0) {
    base.mode = ReductionMode::point_body;
    base.fiber_coords.clear();
    return base;
  }
  base.mode = ReductionMode::adapted;
  if (base.fiber_coords.empty()) base.fiber_coords = coordinate_fields_in(symbol_matrix(d), d.sig.base, d.samples);
  return base;
}

FlatFrameResult flat_frame_solve(const ClassicalTriple& t) {
  FlatFrameResult out;
  const int n = t.sig.base, m = t.quotient_rank();
  out.frame = PolyMatrix::identity(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) out.frame(i, j) = lift(n, out.frame(i, j));
  }
  bool all_zero = true;
  for (const auto& g : t.nabla) {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) all_zero = all_zero && g(i, j).is_zero();
    }
  }
  if (all_zero) {
    out.ok = true;
    return out;
  }
  PolyMatrix nsum(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) nsum(i, j) = Poly(n);
  }
  for (std::size_t a = 0; a < t.F.size(); ++a) {
    int axis = -1;
    Scalar c = 0;
    for (int i = 0; i < n; ++i) {
      if (t.F[a][i].is_zero()) continue;
      if (axis >= 0 || !t.F[a][i].is_constant()) {
        out.failure = "F generator " + std::to_string(a + 1) +
                      " is not a constant multiple of a coordinate field; supply flat_frame";
        return out;
      }
      axis = i;
      c = t.F[a][i].constant_term();
    }
    if (axis < 0) {
      out.failure = "F generator " + std::to_string(a + 1) + " is zero";
      return out;
    }
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        const Poly& g = t.nabla[a](i, j);
        if (!g.is_constant()) {
          out.failure = "connection matrix " + std::to_string(a + 1) + " is not constant; supply flat_frame";
          return out;
        }
        if (!g.is_zero()) nsum(i, j) += Poly::variable(n, axis) * Poly(n, g.constant_term() / c);
      }
    }
  }
  for (std::size_t a = 0; a < t.nabla.size(); ++a) {
    for (std::size_t b = a + 1; b < t.nabla.size(); ++b) {
      if (!(t.nabla[a] * t.nabla[b] == t.nabla[b] * t.nabla[a])) {
        out.failure = "connection matrices do not commute; supply flat_frame";
        return out;
      }
    }
  }
  // Phi = exp(-N) = sum_k (-N)^k / k!, finite when N is nilpotent.
  PolyMatrix term = out.frame;
  PolyMatrix phi = out.frame;
  for (int k = 1; k <= m; ++k) {
    term = term * nsum;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        term(i, j) *= Scalar(-1, k);
        phi(i, j) += term(i, j);
      }
    }
  }
  PolyMatrix last = term * nsum;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (!last(i, j).is_zero()) {
        out.failure = "connection matrices are not nilpotent; supply flat_frame";
        return out;
      }
    }
  }
  if (auto chk = check_flat_frame(t, phi); !chk.ok) throw InternalError("flat frame construction: " + chk.failure);
  out.frame = std::move(phi);
  out.ok = true;
  return out;
}

InvariantBasis invariant_functions(const Distribution& d, const ReductionSetting& s) {
  const Signature sig = d.sig;
  if (s.mode == ReductionMode::point_body && sig.base != 0) {
    throw ReductionError("point_body mode requires a zero-dimensional base");
  }
  InvariantBasis out;
  out.max_xi_degree = s.max_xi_degree < 0 ? sig.rank : std::min(s.max_xi_degree, sig.rank);
  out.max_base_degree = s.mode == ReductionMode::point_body ? 0 : s.max_base_degree;
  const auto exps = exponents_up_to(sig.base, out.max_base_degree);
  const auto gens = d.generators();

  for (int k = 0; k <= out.max_xi_degree; ++k) {
    const auto monos = odd_monomials_of_degree(sig.rank, k);
    struct Unknown {
      OddMonomial m;
      const Exponent* e;
    };
    std::vector<Unknown> unknowns;
    for (const auto& e : exps) {
      for (OddMonomial m : monos) unknowns.push_back({m, &e});
    }
    std::map<std::tuple<int, std::uint32_t, Exponent>, SparseRow> rows;
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
      Function f = Function::monomial(sig, unknowns[u].m, Poly::monomial(sig.base, *unknowns[u].e, 1));
      for (std::size_t j = 0; j < gens.size(); ++j) {
        Function g = apply(gens[j], f);
        for (const auto& [om, c] : g.terms()) {
          for (const auto& [e, v] : c.terms()) {
            Exponent key = e;
            key.resize(sig.base, 0);
            rows[{int(j), om.bits(), key}][int(u)] += v;
          }
        }
      }
    }
    std::vector<SparseRow> system;
    system.reserve(rows.size());
    for (auto& [key, row] : rows) system.push_back(std::move(row));
    for (const auto& v : sparse_kernel(static_cast<int>(unknowns.size()), system)) {
      Function f(sig);
      for (std::size_t u = 0; u < unknowns.size(); ++u) {
        if (v[u] != 0) f.add_term(unknowns[u].m, Poly::monomial(sig.base, *unknowns[u].e, v[u]));
      }
      out.basis.push_back(std::move(f));
    }
  }
  return out;
}

namespace {

/// Coordinates of f in the given basis over Q (all of the same xi-degree).
std::optional<std::vector<Scalar>> coordinates(const Function& f, const std::vector<const Function*>& basis) {
  std::map<std::pair<std::uint32_t, Exponent>, int> rows;
  auto visit = [&](const Function& g) {
    for (const auto& [m, c] : g.terms()) {
      for (const auto& [e, v] : c.terms()) rows.try_emplace({m.bits(), e}, 0);
    }
  };
  visit(f);
  for (const auto* b : basis) visit(*b);
  int idx = 0;
  for (auto& [k, r] : rows) r = idx++;
  QMatrix a(idx, static_cast<int>(basis.size())), rhs(idx, 1);
  for (std::size_t j = 0; j < basis.size(); ++j) {
    for (const auto& [m, c] : basis[j]->terms()) {
      for (const auto& [e, v] : c.terms()) a(rows.at({m.bits(), e}), int(j)) = v;
    }
  }
  for (const auto& [m, c] : f.terms()) {
    for (const auto& [e, v] : c.terms()) rhs(rows.at({m.bits(), e}), 0) = v;
  }
  auto sol = solve(a, rhs);
  if (!sol) return std::nullopt;
  std::vector<Scalar> x;
  for (const auto& p : (*sol)[0].numerators) x.push_back(p / (*sol)[0].denominator);
  return x;
}

QuotientResult singular_quotient(const VectorField& q, const Distribution& d, const ReductionSetting& s) {
  QuotientResult out;
  out.singular = true;
  out.invariants = invariant_functions(d, s);
  std::map<int, std::vector<const Function*>> by_degree;
  for (const auto& f : out.invariants.basis) by_degree[f.degree().value_or(0)].push_back(&f);
  for (const auto& f : out.invariants.basis) {
    Function qf = apply(q, f);
    const int k = f.degree().value_or(0);
    if (!qf.is_zero() && k + 1 <= out.invariants.max_xi_degree) {
      if (!coordinates(qf, by_degree[k + 1])) throw InternalError("invariants are not closed under Q: Q(" + f.to_string() + ") = " + qf.to_string());
    }
    out.q_on_invariants.emplace_back(f, qf);
  }
  for (const auto& [k, fs] : by_degree) {
    if (k == 0) continue;
    std::vector<Function> products;
    for (int a = 1; a < k; ++a) {
      for (const auto* f : by_degree[a]) {
        for (const auto* g : by_degree[k - a]) {
          Function p = *f * *g;
          if (!p.is_zero()) products.push_back(std::move(p));
        }
      }
    }
    int decomposable = 0;
    if (!products.empty()) {
      std::vector<const Function*> ptrs;
      for (const auto& p : products) ptrs.push_back(&p);
      std::map<std::pair<std::uint32_t, Exponent>, int> rows;
      for (const auto* p : ptrs) {
        for (const auto& [m, c] : p->terms()) {
          for (const auto& [e, v] : c.terms()) rows.try_emplace({m.bits(), e}, int(rows.size()));
        }
      }
      QMatrix a(static_cast<int>(rows.size()), static_cast<int>(ptrs.size()));
      for (std::size_t j = 0; j < ptrs.size(); ++j) {
        for (const auto& [m, c] : ptrs[j]->terms()) {
          for (const auto& [e, v] : c.terms()) a(rows.at({m.bits(), e}), int(j)) = v;
        }
      }
      decomposable = rank(a);
    }
    const int count = static_cast<int>(fs.size()) - decomposable;
    if (count > 0) out.generator_degrees[k] = count;
  }
  return out;
}

}  // namespace

QuotientResult reduce(const VectorField& q, const Distribution& d, const ReductionSetting& s) {
  q.require_degree(1, "reduce");
  check_signature(q.signature(), d.sig);
  if (auto inv = dist_is_involutive(d); !inv) {
    throw ReductionError("distribution is not involutive: [" + inv.first + ", " + inv.second +
                         "] = " + inv.bracket.to_string());
  }
  if (auto qi = dist_is_q_invariant(d, q); !qi) {
    throw ReductionError("distribution is not Q-invariant: [Q, " + qi.generator + "] = " + qi.bracket.to_string());
  }
  const Signature sig = d.sig;
  if (!d.certified) {
    if (s.mode == ReductionMode::point_body && sig.base == 0) return singular_quotient(q, d, s);
    throw ReductionError("not a distribution (" + d.failure + "); only point-body singular modules are supported");
  }
  if (s.mode == ReductionMode::point_body && sig.base != 0) {
    throw ReductionError("point_body mode requires a zero-dimensional base");
  }

  ClassicalTriple t = dist_to_classical(d);
  PolyMatrix phi;
  if (s.flat_frame) {
    phi = *s.flat_frame;
  } else {
    auto ff = flat_frame_solve(t);
    if (!ff.ok) throw ReductionError("no flat frame: " + ff.failure);
    phi = std::move(ff.frame);
  }
  if (auto chk = check_flat_frame(t, phi); !chk.ok) throw ReductionError("flat frame rejected: " + chk.failure);

  const int n = sig.base, r = sig.rank, k = t.B.cols(), m = t.quotient_rank();
  std::vector<int> fiber = s.mode == ReductionMode::adapted ? s.fiber_coords : std::vector<int>{};
  std::sort(fiber.begin(), fiber.end());
  fiber.erase(std::unique(fiber.begin(), fiber.end()), fiber.end());
  for (int i : fiber) {
    if (i < 0 || i >= n) throw ReductionError("fiber coordinate out of range");
  }
  {
    PolyMatrix fm(n, static_cast<int>(t.F.size()));
    for (std::size_t a = 0; a < t.F.size(); ++a) {
      for (int i = 0; i < n; ++i) fm(i, int(a)) = lift(n, t.F[a][i]);
    }
    auto coord = coordinate_fields_in(fm, n, d.samples);
    const bool spans = rank(fm) == static_cast<int>(fiber.size()) &&
                       std::includes(coord.begin(), coord.end(), fiber.begin(), fiber.end());
    if (!spans) throw ReductionError("F is not spanned by the coordinate fields of the declared fiber coordinates");
  }

  PolyMatrix p = lifted_frame(t, phi);
  auto pinv = polynomial_inverse(p);
  if (!pinv) throw ReductionError("the lifted frame [B | flat frame] has no polynomial inverse");

  QuotientResult out;
  for (int i = 0; i < n; ++i) {
    if (!std::binary_search(fiber.begin(), fiber.end(), i)) out.transverse_coords.push_back(i);
  }
  for (int g = 0; g < m; ++g) {
    Function z(sig);
    for (int b = 0; b < r; ++b) {
      if (!(*pinv)(k + g, b).is_zero()) z.add_term(OddMonomial::generator(b), lift(n, (*pinv)(k + g, b)));
    }
    out.zeta.push_back(std::move(z));
  }
  for (const auto& g : d.generators()) {
    for (int i : out.transverse_coords) {
      Function v = apply(g, Function::even_generator(sig, i));
      if (!v.is_zero()) throw ReductionError("x" + std::to_string(i + 1) + " is not invariant: " + g.to_string());
    }
    for (std::size_t z = 0; z < out.zeta.size(); ++z) {
      Function v = apply(g, out.zeta[z]);
      if (!v.is_zero()) {
        throw ReductionError("reduced odd coordinate " + std::to_string(z + 1) + " is not invariant under " +
                             g.to_string() + ": " + v.to_string());
      }
    }
  }

  // Substitute xi = P theta; the result must involve only theta_{k..r-1}.
  std::vector<Function> sub;
  for (int b = 0; b < r; ++b) {
    Function f(sig);
    for (int j = 0; j < r; ++j) {
      if (!p(b, j).is_zero()) f.add_term(OddMonomial::generator(j), lift(n, p(b, j)));
    }
    sub.push_back(std::move(f));
  }
  const Signature red{n - static_cast<int>(fiber.size()), m};
  auto transform = [&](const Function& f, const std::string& what) {
    Function theta(sig);
    for (const auto& [mono, c] : f.terms()) {
      Function prod = Function::from_poly(sig, c);
      for (int b : mono.indices()) prod = prod * sub[b];
      theta += prod;
    }
    Function outf(red);
    for (const auto& [mono, c] : theta.terms()) {
      if ((mono.bits() & ((std::uint32_t{1} << k) - 1)) != 0) {
        throw InternalError(what + " involves odd coordinates along B");
      }
      for (int i : fiber) {
        if (c.depends_on(i)) throw InternalError(what + " depends on the fiber coordinate x" + std::to_string(i + 1));
      }
      outf.add_term(OddMonomial(mono.bits() >> k), lift(red.base, c.drop_variables(fiber)));
    }
    return outf;
  };
  std::vector<Function> even, odd;
  for (int i : out.transverse_coords) {
    even.push_back(transform(apply(q, Function::even_generator(sig, i)), "Q(x" + std::to_string(i + 1) + ")"));
  }
  for (int g = 0; g < m; ++g) odd.push_back(transform(apply(q, out.zeta[g]), "Q(zeta" + std::to_string(g + 1) + ")"));
  out.q = VectorField(red, std::move(even), std::move(odd));
  auto h = is_homological(out.q);
  if (!h) throw InternalError("reduced vector field is not homological: " + h.witness);
  out.algebroid = extract_structure(out.q);
  return out;
}

}  // namespace nq1
