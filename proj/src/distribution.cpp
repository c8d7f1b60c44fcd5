#include "nq1/distribution.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

namespace nq1 {

std::vector<Point> sample_points(int n, const SampleOptions& opt) {
  std::vector<Point> pts;
  pts.emplace_back(n, Scalar(0));
  std::mt19937_64 eng(opt.seed);
  for (int s = 0; s < opt.samples; ++s) {
    Point p(n);
    for (auto& c : p) {
      long num = static_cast<long>(eng() % 15) - 7;
      long den = 1 + static_cast<long>(eng() % 4);
      c = Scalar(mpz_class(num), mpz_class(den));
      c.canonicalize();
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

const char* to_string(Certainty c) { return c == Certainty::exact ? "exact" : "sampled"; }

namespace {

std::string point_to_string(const Point& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += scalar_to_string(p[i]);
  }
  return s + ")";
}

Poly lift(int n, const Poly& p) {
  Poly q(n);
  q += p;
  return q;
}

}  // namespace

namespace {

SpanSolution solve_in_span_ordered(const PolyMatrix& cols, const std::vector<Poly>& rhs,
                                   const std::vector<Point>& samples) {
  SpanSolution out;
  PolyMatrix b(cols.rows(), 1);
  for (int i = 0; i < cols.rows(); ++i) b(i, 0) = rhs.at(i);
  auto sol = solve(cols, b);
  if (!sol) {
    out.reason = "not in the span over the rational function field";
    return out;
  }
  auto& fs = (*sol)[0];
  out.numerators = std::move(fs.numerators);
  out.denominator = std::move(fs.denominator);
  if (out.denominator.is_constant()) {
    Scalar c = 1 / out.denominator.constant_term();
    for (auto& p : out.numerators) p *= c;
    out.denominator = Poly(0, 1);
    out.solvable = true;
    return out;
  }
  std::vector<Poly> quotients;
  bool exact = true;
  for (const auto& p : out.numerators) {
    auto q = p.is_zero() ? std::optional<Poly>(p) : p.divide_exact(out.denominator);
    if (!q) {
      exact = false;
      break;
    }
    quotients.push_back(std::move(*q));
  }
  if (exact) {
    out.numerators = std::move(quotients);
    out.denominator = Poly(0, 1);
    out.solvable = true;
    return out;
  }
  for (const auto& p : samples) {
    if (out.denominator.evaluate(p) == 0) {
      out.reason = "coefficients have a pole at sample point " + point_to_string(p) +
                   " (denominator " + out.denominator.to_string() + ")";
      return out;
    }
  }
  out.solvable = true;
  out.certainty = Certainty::sampled;
  return out;
}

std::size_t column_cost(const PolyMatrix& m, int j) {
  std::size_t cost = 0;
  for (int i = 0; i < m.rows(); ++i) cost += pivot_cost(m(i, j));
  return cost;
}

}  // namespace

// With dependent columns the particular solution depends on the pivot
// order; a pole can be an artefact of that choice, so a failure is retried
// once with the cheapest columns first.
SpanSolution solve_in_span(const PolyMatrix& cols, const std::vector<Poly>& rhs,
                           const std::vector<Point>& samples) {
  SpanSolution first = solve_in_span_ordered(cols, rhs, samples);
  if (first.solvable || first.numerators.empty()) return first;
  std::vector<int> order(cols.cols());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return column_cost(cols, a) < column_cost(cols, b); });
  if (std::is_sorted(order.begin(), order.end())) return first;
  PolyMatrix permuted(cols.rows(), cols.cols());
  for (int i = 0; i < cols.rows(); ++i) {
    for (int j = 0; j < cols.cols(); ++j) permuted(i, j) = cols(i, order[j]);
  }
  SpanSolution second = solve_in_span_ordered(permuted, rhs, samples);
  if (!second.solvable) return first;
  std::vector<Poly> numerators(cols.cols());
  for (int j = 0; j < cols.cols(); ++j) numerators[order[j]] = std::move(second.numerators[j]);
  second.numerators = std::move(numerators);
  return second;
}

Membership module_membership(const VectorField& v, const std::vector<VectorField>& gens,
                             const std::vector<Point>& samples) {
  const Signature sig = v.signature();
  for (const auto& g : gens) {
    check_signature(g.signature(), sig);
    if (!g.is_homogeneous()) throw DegreeError("module generators must be homogeneous");
  }
  Membership out;
  out.coefficients.assign(gens.size(), Function(sig));
  out.denominator = Poly(sig.base, 1);
  out.member = true;
  const int nslots = sig.base + sig.rank;

  for (const auto& [dv, part] : v.parts()) {
    struct Unknown {
      int gen;
      OddMonomial mono;
      VectorField field;
    };
    std::vector<Unknown> unknowns;
    for (std::size_t j = 0; j < gens.size(); ++j) {
      if (gens[j].is_zero()) continue;
      int k = dv - *gens[j].degree();
      if (k < 0 || k > sig.rank) continue;
      for (OddMonomial m : odd_monomials_of_degree(sig.rank, k)) {
        VectorField f = Function::monomial(sig, m, Poly(sig.base, 1)) * gens[j];
        if (!f.is_zero()) unknowns.push_back({int(j), m, std::move(f)});
      }
    }
    std::map<std::pair<int, std::uint32_t>, int> rows;
    auto visit = [&](const VectorField& x) {
      for (int s = 0; s < nslots; ++s) {
        const Function& f = s < sig.base ? x.even(s) : x.odd(s - sig.base);
        for (const auto& [m, c] : f.terms()) rows.try_emplace({s, m.bits()}, 0);
      }
    };
    visit(part);
    for (const auto& u : unknowns) visit(u.field);
    int idx = 0;
    for (auto& [key, r] : rows) r = idx++;

    PolyMatrix a(idx, static_cast<int>(unknowns.size()));
    std::vector<Poly> rhs(idx, Poly(sig.base));
    auto fill = [&](const VectorField& x, auto&& put) {
      for (int s = 0; s < nslots; ++s) {
        const Function& f = s < sig.base ? x.even(s) : x.odd(s - sig.base);
        for (const auto& [m, c] : f.terms()) put(rows.at({s, m.bits()}), c);
      }
    };
    fill(part, [&](int r, const Poly& c) { rhs[r] = lift(sig.base, c); });
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
      fill(unknowns[u].field, [&](int r, const Poly& c) { a(r, int(u)) = lift(sig.base, c); });
    }
    for (int i = 0; i < a.rows(); ++i) {
      for (int j = 0; j < a.cols(); ++j) {
        if (a(i, j).nvars() != sig.base) a(i, j) = Poly(sig.base);
      }
    }

    SpanSolution s = solve_in_span(a, rhs, samples);
    if (!s.solvable) {
      out.member = false;
      out.reason = "degree " + std::to_string(dv) + " part: " + s.reason;
      out.coefficients.clear();
      return out;
    }
    if (s.certainty == Certainty::sampled) out.certainty = Certainty::sampled;
    // Bring both sides to the common denominator out.denominator * s.denominator.
    const Poly sden = lift(sig.base, s.denominator);
    if (!sden.is_constant() || sden.constant_term() != 1) {
      for (auto& c : out.coefficients) c = sden * c;
    }
    std::vector<Function> add(gens.size(), Function(sig));
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
      if (s.numerators[u].is_zero()) continue;
      add[unknowns[u].gen].add_term(unknowns[u].mono, out.denominator * lift(sig.base, s.numerators[u]));
    }
    for (std::size_t j = 0; j < gens.size(); ++j) out.coefficients[j] += add[j];
    out.denominator = out.denominator * sden;
  }
  return out;
}

std::vector<VectorField> Distribution::generators() const {
  std::vector<VectorField> all = gens_m1;
  all.insert(all.end(), gens_0.begin(), gens_0.end());
  return all;
}

std::string Distribution::label(int degree, int index) const {
  const auto& names = degree < 0 ? labels_m1 : labels_0;
  if (index < static_cast<int>(names.size())) return names[index];
  return (degree < 0 ? "D-1[" : "D0[") + std::to_string(index + 1) + "]";
}

Distribution dist_validate(Signature sig, std::vector<VectorField> gens_m1, std::vector<VectorField> gens_0,
                           const SampleOptions& opt, std::vector<std::string> labels_m1,
                           std::vector<std::string> labels_0) {
  Distribution d;
  d.sig = sig;
  d.gens_m1 = std::move(gens_m1);
  d.gens_0 = std::move(gens_0);
  d.labels_m1 = std::move(labels_m1);
  d.labels_0 = std::move(labels_0);
  d.samples = sample_points(sig.base, opt);
  for (const auto& g : d.gens_m1) {
    check_signature(g.signature(), sig);
    g.require_degree(-1, "distribution generator");
  }
  for (const auto& g : d.gens_0) {
    check_signature(g.signature(), sig);
    g.require_degree(0, "distribution generator");
  }

  const int k = static_cast<int>(d.gens_m1.size());
  const int l = static_cast<int>(d.gens_0.size());
  PolyMatrix e(sig.rank, k), t(sig.base, l);
  for (int j = 0; j < k; ++j) {
    Section s = field_section(d.gens_m1[j]);
    for (int a = 0; a < sig.rank; ++a) e(a, j) = s[a];
  }
  for (int j = 0; j < l; ++j) {
    auto s = symbol(d.gens_0[j]);
    for (int i = 0; i < sig.base; ++i) t(i, j) = s[i];
  }

  auto fail = [&](const Point& p, std::string why) {
    d.certified = false;
    d.failing_point = p;
    d.failure = std::move(why);
    return d;
  };
  auto ee = eliminate(e);
  if (ee.rank() < k) {
    return fail(d.samples.front(), "degree -1 generators are dependent in E at every point");
  }
  auto te = eliminate(t);
  if (te.rank() < l) {
    return fail(d.samples.front(), "symbols of degree 0 generators are dependent at every point");
  }
  for (const auto& p : d.samples) {
    if (rank(evaluate(e, p)) < k) {
      return fail(p, "degree -1 generators are dependent in E at " + point_to_string(p));
    }
    if (rank(evaluate(t, p)) < l) {
      return fail(p, "symbols of degree 0 generators are dependent at " + point_to_string(p));
    }
  }
  d.certified = true;
  d.certainty = ee.det.is_constant() && te.det.is_constant() ? Certainty::exact : Certainty::sampled;
  return d;
}

Membership module_membership(const VectorField& v, const Distribution& d) {
  return module_membership(v, d.generators(), d.samples);
}

InvolutivityCheck dist_is_involutive(const Distribution& d) {
  InvolutivityCheck out;
  const auto all = d.generators();
  auto test = [&](const VectorField& x, const VectorField& y, std::string lx, std::string ly) {
    VectorField br = bracket(x, y);
    auto m = module_membership(br, all, d.samples);
    if (!m) {
      out.involutive = false;
      out.first = std::move(lx);
      out.second = std::move(ly);
      out.bracket = std::move(br);
      return false;
    }
    if (m.certainty == Certainty::sampled) out.certainty = Certainty::sampled;
    return true;
  };
  for (std::size_t i = 0; i < d.gens_0.size(); ++i) {
    for (std::size_t j = 0; j < d.gens_m1.size(); ++j) {
      if (!test(d.gens_0[i], d.gens_m1[j], d.label(0, int(i)), d.label(-1, int(j)))) return out;
    }
  }
  for (std::size_t i = 0; i < d.gens_0.size(); ++i) {
    for (std::size_t j = i + 1; j < d.gens_0.size(); ++j) {
      if (!test(d.gens_0[i], d.gens_0[j], d.label(0, int(i)), d.label(0, int(j)))) return out;
    }
  }
  return out;
}

QInvarianceCheck dist_is_q_invariant(const Distribution& d, const VectorField& q) {
  q.require_degree(1, "dist_is_q_invariant");
  QInvarianceCheck out;
  const auto all = d.generators();
  for (int deg : {-1, 0}) {
    const auto& gens = deg < 0 ? d.gens_m1 : d.gens_0;
    for (std::size_t j = 0; j < gens.size(); ++j) {
      VectorField br = bracket(q, gens[j]);
      auto m = module_membership(br, all, d.samples);
      if (!m) {
        out.invariant = false;
        out.generator = d.label(deg, int(j));
        out.bracket = std::move(br);
        return out;
      }
      if (m.certainty == Certainty::sampled) out.certainty = Certainty::sampled;
    }
  }
  return out;
}

bool module_equal(const Distribution& a, const Distribution& b) {
  check_signature(a.sig, b.sig);
  const auto ga = a.generators(), gb = b.generators();
  for (const auto& g : ga) {
    if (!module_membership(g, gb, b.samples)) return false;
  }
  for (const auto& g : gb) {
    if (!module_membership(g, ga, a.samples)) return false;
  }
  return true;
}

std::vector<int> greedy_complement(const PolyMatrix& b, const Point& p) {
  const int r = b.rows();
  QMatrix cur = evaluate(b, p);
  int rk = rank(cur);
  std::vector<int> chosen;
  for (int g = 0; g < r && rk < r; ++g) {
    QMatrix next(r, cur.cols() + 1);
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < cur.cols(); ++j) next(i, j) = cur(i, j);
    }
    next(g, cur.cols()) = 1;
    int nr = rank(next);
    if (nr > rk) {
      chosen.push_back(g);
      cur = std::move(next);
      rk = nr;
    }
  }
  return chosen;
}

namespace {

PolyMatrix adapted_frame(const ClassicalTriple& t) {
  const int r = t.sig.rank;
  const int m = t.quotient_rank();
  PolyMatrix f(r, r);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) f(i, j) = Poly(t.sig.base);
  }
  for (int g = 0; g < m; ++g) f(t.complement[g], g) = Poly(t.sig.base, 1);
  for (int j = 0; j < t.B.cols(); ++j) {
    for (int i = 0; i < r; ++i) f(i, m + j) = lift(t.sig.base, t.B(i, j));
  }
  return f;
}

PolyMatrix apply_entrywise(const BaseVectorField& y, const PolyMatrix& m) {
  PolyMatrix out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) out(i, j) = base_apply(y, lift(int(y.size()), m(i, j)));
  }
  return out;
}

PolyMatrix add(PolyMatrix a, const PolyMatrix& b, const Scalar& s = 1) {
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) a(i, j) += s * b(i, j);
  }
  return a;
}

bool is_zero(const PolyMatrix& m) {
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (!m(i, j).is_zero()) return false;
    }
  }
  return true;
}

std::string matrix_to_string(const PolyMatrix& m) {
  std::string s = "[";
  for (int i = 0; i < m.rows(); ++i) {
    if (i) s += ", ";
    s += "[";
    for (int j = 0; j < m.cols(); ++j) {
      if (j) s += ", ";
      s += m(i, j).is_zero() ? "0" : m(i, j).to_string();
    }
    s += "]";
  }
  return s + "]";
}

std::string vf_to_string(const BaseVectorField& y) { return section_to_string(y, "d/dx"); }

}  // namespace

std::pair<std::vector<Poly>, std::vector<Poly>> split_section(const ClassicalTriple& t, const Section& s,
                                                              const std::vector<Point>& samples) {
  PolyMatrix f = adapted_frame(t);
  std::vector<Poly> rhs;
  for (const auto& p : s) rhs.push_back(lift(t.sig.base, p));
  auto sol = solve_in_span(f, rhs, samples);
  if (!sol.solvable || sol.certainty != Certainty::exact) {
    throw ClassicalError("section has no polynomial coordinates in the adapted frame", section_to_string(s));
  }
  const int m = t.quotient_rank();
  std::vector<Poly> c(sol.numerators.begin(), sol.numerators.begin() + m);
  std::vector<Poly> b(sol.numerators.begin() + m, sol.numerators.end());
  for (auto& p : c) p = lift(t.sig.base, p);
  for (auto& p : b) p = lift(t.sig.base, p);
  return {c, b};
}

ClassicalTriple dist_to_classical(const Distribution& d) {
  if (!d.certified) throw ClassicalError("not a distribution", d.failure);
  if (auto inv = dist_is_involutive(d); !inv) {
    throw ClassicalError("distribution is not involutive",
                         "[" + inv.first + ", " + inv.second + "] = " + inv.bracket.to_string());
  }
  const Signature sig = d.sig;
  ClassicalTriple t;
  t.sig = sig;
  const int k = static_cast<int>(d.gens_m1.size());
  t.B = PolyMatrix(sig.rank, k);
  for (int j = 0; j < k; ++j) {
    Section s = field_section(d.gens_m1[j]);
    for (int a = 0; a < sig.rank; ++a) t.B(a, j) = s[a];
  }
  t.complement = greedy_complement(t.B, d.samples.front());
  const int m = t.quotient_rank();
  for (std::size_t a = 0; a < d.gens_0.size(); ++a) {
    const VectorField& x = d.gens_0[a];
    t.F.push_back(symbol(x));
    for (int j = 0; j < k; ++j) {
      VectorField br = bracket(x, d.gens_m1[j]);
      if (!module_membership(br, d.gens_m1, d.samples)) {
        throw ClassicalError("connection is not well defined",
                             "[" + d.label(0, int(a)) + ", " + d.label(-1, j) + "] = " + br.to_string());
      }
    }
    PolyMatrix g(m, m);
    for (int c = 0; c < m; ++c) {
      VectorField br = bracket(x, VectorField::d_odd(sig, t.complement[c]));
      auto [cc, bb] = split_section(t, field_section(br), d.samples);
      for (int e = 0; e < m; ++e) g(e, c) = cc[e];
    }
    t.nabla.push_back(std::move(g));
  }
  if (auto chk = check_triple(t, d.samples); !chk.ok) throw ClassicalError("classical data invalid", chk.failure);
  return t;
}

TripleCheck check_triple(const ClassicalTriple& t, const std::vector<Point>& samples) {
  TripleCheck out;
  const int n = t.sig.base;
  const int l = static_cast<int>(t.F.size());
  const int m = t.quotient_rank();
  if (static_cast<int>(t.nabla.size()) != l) {
    out.ok = false;
    out.failure = "one connection matrix per F generator required";
    return out;
  }
  PolyMatrix fm(n, l);
  for (int a = 0; a < l; ++a) {
    for (int i = 0; i < n; ++i) fm(i, a) = lift(n, t.F[a][i]);
  }
  for (int a = 0; a < l; ++a) {
    for (int b = a + 1; b < l; ++b) {
      BaseVectorField w = base_bracket(t.F[a], t.F[b]);
      auto sol = solve_in_span(fm, w, samples);
      if (!sol.solvable) {
        out.ok = false;
        out.failure = "F is not involutive: [F" + std::to_string(a + 1) + ",F" + std::to_string(b + 1) +
                      "] = " + vf_to_string(w);
        return out;
      }
      PolyMatrix curv = add(apply_entrywise(t.F[a], t.nabla[b]), apply_entrywise(t.F[b], t.nabla[a]), -1);
      curv = add(curv, t.nabla[a] * t.nabla[b]);
      curv = add(curv, t.nabla[b] * t.nabla[a], -1);
      PolyMatrix lhs(m, m);
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) lhs(i, j) = lift(n, sol.denominator) * curv(i, j);
      }
      for (int c = 0; c < l; ++c) {
        if (sol.numerators[c].is_zero()) continue;
        for (int i = 0; i < m; ++i) {
          for (int j = 0; j < m; ++j) lhs(i, j) -= sol.numerators[c] * t.nabla[c](i, j);
        }
      }
      if (!is_zero(lhs)) {
        out.ok = false;
        out.failure = "connection is not flat: curvature(F" + std::to_string(a + 1) + ",F" +
                      std::to_string(b + 1) + ") = " + matrix_to_string(lhs);
        return out;
      }
    }
  }
  return out;
}

TripleCheck check_flat_frame(const ClassicalTriple& t, const PolyMatrix& phi) {
  TripleCheck out;
  const int m = t.quotient_rank();
  if (phi.rows() != m || phi.cols() != m) {
    out.ok = false;
    out.failure = "flat frame must be " + std::to_string(m) + " x " + std::to_string(m);
    return out;
  }
  if (rank(phi) < m) {
    out.ok = false;
    out.failure = "flat frame is singular";
    return out;
  }
  for (std::size_t a = 0; a < t.F.size(); ++a) {
    PolyMatrix r = add(apply_entrywise(t.F[a], phi), t.nabla[a] * phi);
    if (!is_zero(r)) {
      out.ok = false;
      out.failure = "frame is not flat along F" + std::to_string(a + 1) + ": " + matrix_to_string(r);
      return out;
    }
  }
  return out;
}

Distribution classical_to_dist(const ClassicalTriple& t, const PolyMatrix& phi, const SampleOptions& opt) {
  const Signature sig = t.sig;
  const int n = sig.base, r = sig.rank, k = t.B.cols(), m = t.quotient_rank();
  if (k + m != r) throw ClassicalError("rank(B) + rank(E/B) must equal the rank of E");
  if (auto chk = check_flat_frame(t, phi); !chk.ok) throw ClassicalError("no flat frame", chk.failure);

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
  auto inv = fraction_inverse(p);
  if (!inv) throw ClassicalError("B and the lifted flat frame do not span E");
  const auto& [num, den] = *inv;

  std::vector<VectorField> m1, g0;
  std::vector<std::string> l1, l0;
  for (int j = 0; j < k; ++j) {
    Section s(r);
    for (int i = 0; i < r; ++i) s[i] = lift(n, t.B(i, j));
    m1.push_back(section_field(sig, s));
    l1.push_back("b" + std::to_string(j + 1));
  }
  for (std::size_t a = 0; a < t.F.size(); ++a) {
    // M^T = Y(P) P^{-1} = Y(P) N / den.
    PolyMatrix mt = apply_entrywise(t.F[a], p) * num;
    Poly scale = lift(n, den);
    bool divisible = true;
    PolyMatrix q(r, r);
    for (int i = 0; i < r && divisible; ++i) {
      for (int j = 0; j < r; ++j) {
        auto d = mt(i, j).is_zero() ? std::optional<Poly>(Poly(n)) : mt(i, j).divide_exact(scale);
        if (!d) {
          divisible = false;
          break;
        }
        q(i, j) = lift(n, *d);
      }
    }
    BaseVectorField sym = t.F[a];
    if (divisible) {
      mt = std::move(q);
    } else {
      for (auto& c : sym) c = scale * c;
    }
    std::vector<Function> even, odd(r, Function(sig));
    for (int i = 0; i < n; ++i) even.push_back(Function::from_poly(sig, sym[i]));
    for (int b = 0; b < r; ++b) {
      for (int g = 0; g < r; ++g) {
        if (!mt(g, b).is_zero()) odd[g].add_term(OddMonomial::generator(b), lift(n, mt(g, b)));
      }
    }
    g0.emplace_back(sig, std::move(even), std::move(odd));
    l0.push_back("X" + std::to_string(a + 1));
  }
  return dist_validate(sig, std::move(m1), std::move(g0), opt, std::move(l1), std::move(l0));
}

TaylorDecomposition taylor_expand_degree1(const VectorField& p, const PolyMatrix& frame) {
  p.require_degree(1, "taylor_expand_degree1");
  const Signature sig = p.signature();
  const int r = sig.rank;
  if (frame.rows() != r || frame.cols() != r) throw Error("frame must be r x r");
  PolyMatrix f(r, r);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) f(i, j) = lift(sig.base, frame(i, j));
  }
  auto inv = polynomial_inverse(f);
  if (!inv) throw Error("not a frame: the inverse is not polynomial");
  TaylorDecomposition out;
  std::vector<VectorField> a;
  for (int i = 0; i < r; ++i) {
    Function xt(sig);
    for (int b = 0; b < r; ++b) {
      if (!(*inv)(i, b).is_zero()) xt.add_term(OddMonomial::generator(b), lift(sig.base, (*inv)(i, b)));
    }
    out.dual.push_back(std::move(xt));
    Section s(r);
    for (int b = 0; b < r; ++b) s[b] = f(b, i);
    a.push_back(section_field(sig, s));
  }
  out.reassembled = VectorField(sig);
  for (int i = 0; i < r; ++i) {
    out.x.push_back(bracket(p, a[i]));
    out.reassembled += out.dual[i] * out.x[i];
  }
  out.b.assign(r, {});
  for (int i = 0; i < r; ++i) {
    for (int k = 0; k < r; ++k) {
      out.b[i].push_back(bracket(out.x[i], a[k]));
      out.reassembled += Scalar(1, 2) * ((out.dual[i] * out.dual[k]) * out.b[i][k]);
    }
  }
  if (!(out.reassembled == p)) throw InternalError("Taylor reassembly mismatch: " + (out.reassembled - p).to_string());
  return out;
}

}  // namespace nq1
