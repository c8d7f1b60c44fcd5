#include "nq1/lie2.hpp"

namespace nq1 {

StrictLie2Algebra::StrictLie2Algebra(int dim_m1, int dim_0)
    : d1_(dim_m1), d0_(dim_0),
      delta_(std::size_t(dim_0) * dim_m1, Scalar(0)),
      k_(std::size_t(dim_0) * dim_0 * dim_0, Scalar(0)),
      m_(std::size_t(dim_0) * dim_m1 * dim_m1, Scalar(0)) {
  if (dim_m1 < 0 || dim_0 < 0) throw Error("negative Lie 2-algebra dimension");
  for (int j = 0; j < dim_m1; ++j) names_m1.push_back("w" + std::to_string(j + 1));
  for (int a = 0; a < dim_0; ++a) names_0.push_back("e" + std::to_string(a + 1));
}

void StrictLie2Algebra::set_bracket(int a, int b, int c, const Scalar& v) {
  if (a == b) {
    if (v != 0) throw Error("[e_a, e_a] must vanish");
    return;
  }
  k_.at((std::size_t(a) * d0_ + b) * d0_ + c) = v;
  k_.at((std::size_t(b) * d0_ + a) * d0_ + c) = -v;
}

namespace {

using Vec = std::vector<Scalar>;

bool is_zero(const Vec& v) {
  for (const auto& c : v) {
    if (c != 0) return false;
  }
  return true;
}

std::string vec_to_string(const Vec& v, const std::vector<std::string>& names) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    std::string c = scalar_to_string(v[i]);
    bool neg = c[0] == '-';
    if (neg) c = c.substr(1);
    std::string piece = (c == "1" ? "" : c + "*") + names[i];
    if (s.empty()) {
      s = (neg ? "-" : "") + piece;
    } else {
      s += (neg ? " - " : " + ") + piece;
    }
  }
  return s.empty() ? "0" : s;
}

// [x, y] in L_0.
Vec br0(const StrictLie2Algebra& l, const Vec& x, const Vec& y) {
  Vec out(l.dim_0(), 0);
  for (int a = 0; a < l.dim_0(); ++a) {
    if (x[a] == 0) continue;
    for (int b = 0; b < l.dim_0(); ++b) {
      if (y[b] == 0) continue;
      for (int c = 0; c < l.dim_0(); ++c) out[c] += x[a] * y[b] * l.bracket(a, b, c);
    }
  }
  return out;
}

// [x, w] in L_{-1}.
Vec act(const StrictLie2Algebra& l, const Vec& x, const Vec& w) {
  Vec out(l.dim_m1(), 0);
  for (int a = 0; a < l.dim_0(); ++a) {
    if (x[a] == 0) continue;
    for (int j = 0; j < l.dim_m1(); ++j) {
      if (w[j] == 0) continue;
      for (int k = 0; k < l.dim_m1(); ++k) out[k] += x[a] * w[j] * l.action(a, j, k);
    }
  }
  return out;
}

Vec delta(const StrictLie2Algebra& l, const Vec& w) {
  Vec out(l.dim_0(), 0);
  for (int i = 0; i < l.dim_0(); ++i) {
    for (int j = 0; j < l.dim_m1(); ++j) out[i] += l.delta(i, j) * w[j];
  }
  return out;
}

Vec unit(int n, int i) {
  Vec v(n, 0);
  v[i] = 1;
  return v;
}

Vec sub(Vec a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

}  // namespace

AxiomReport check_lie2(const StrictLie2Algebra& l) {
  AxiomReport rep;
  const int d0 = l.dim_0(), d1 = l.dim_m1();
  const auto& n0 = l.names_0;
  const auto& n1 = l.names_m1;
  for (int a = 0; a < d0; ++a) {
    for (int b = a + 1; b < d0; ++b) {
      for (int c = b + 1; c < d0; ++c) {
        Vec x = unit(d0, a), y = unit(d0, b), z = unit(d0, c);
        Vec j = br0(l, br0(l, x, y), z);
        Vec t = br0(l, br0(l, y, z), x);
        Vec u = br0(l, br0(l, z, x), y);
        for (int i = 0; i < d0; ++i) j[i] += t[i] + u[i];
        AxiomEntry e{"jacobi (" + n0[a] + "," + n0[b] + "," + n0[c] + ")", is_zero(j), ""};
        if (!e.pass) e.witness = vec_to_string(j, n0);
        rep.entries.push_back(std::move(e));
      }
    }
  }
  for (int a = 0; a < d0; ++a) {
    for (int b = a + 1; b < d0; ++b) {
      for (int j = 0; j < d1; ++j) {
        Vec x = unit(d0, a), y = unit(d0, b), w = unit(d1, j);
        Vec r = sub(sub(act(l, x, act(l, y, w)), act(l, y, act(l, x, w))), act(l, br0(l, x, y), w));
        AxiomEntry e{"module (" + n0[a] + "," + n0[b] + "," + n1[j] + ")", is_zero(r), ""};
        if (!e.pass) e.witness = vec_to_string(r, n1);
        rep.entries.push_back(std::move(e));
      }
    }
  }
  for (int a = 0; a < d0; ++a) {
    for (int j = 0; j < d1; ++j) {
      Vec x = unit(d0, a), w = unit(d1, j);
      Vec r = sub(delta(l, act(l, x, w)), br0(l, x, delta(l, w)));
      AxiomEntry e{"equivariance (" + n0[a] + "," + n1[j] + ")", is_zero(r), ""};
      if (!e.pass) e.witness = vec_to_string(r, n0);
      rep.entries.push_back(std::move(e));
    }
  }
  for (int j = 0; j < d1; ++j) {
    for (int k = j; k < d1; ++k) {
      Vec w = unit(d1, j), v = unit(d1, k);
      Vec r = act(l, delta(l, w), v);
      Vec s = act(l, delta(l, v), w);
      for (int i = 0; i < d1; ++i) r[i] += s[i];
      AxiomEntry e{"peiffer (" + n1[j] + "," + n1[k] + ")", is_zero(r), ""};
      if (!e.pass) e.witness = vec_to_string(r, n1);
      rep.entries.push_back(std::move(e));
    }
  }
  return rep;
}

Lie2Action::Lie2Action(Signature sig, int dim_m1, int dim_0)
    : mu_m1(dim_m1, VectorField(sig)), mu0(dim_0, VectorField(sig)), sig_(sig),
      eta_(std::size_t(dim_0) * (dim_0 > 0 ? dim_0 - 1 : 0) / 2, VectorField(sig)) {}

std::size_t Lie2Action::pair_index(int a, int b) const {
  const int d = dim_0();
  if (a < 0 || b < 0 || a >= d || b >= d || a >= b) throw Error("eta index out of range");
  // Pairs (0,1),(0,2),...,(0,d-1),(1,2),...
  return std::size_t(a) * (2 * d - a - 1) / 2 + (b - a - 1);
}

VectorField Lie2Action::eta(int a, int b) const {
  if (a == b) return VectorField(sig_);
  if (a < b) return eta_.at(pair_index(a, b));
  return -eta_.at(pair_index(b, a));
}

void Lie2Action::set_eta(int a, int b, const VectorField& v) {
  check_signature(v.signature(), sig_);
  v.require_degree(-1, "eta");
  if (a == b) throw Error("eta is alternating: eta(e ^ e) = 0");
  if (a < b) {
    eta_.at(pair_index(a, b)) = v;
  } else {
    eta_.at(pair_index(b, a)) = -v;
  }
}

bool Lie2Action::eta_is_zero() const {
  for (const auto& e : eta_) {
    if (!e.is_zero()) return false;
  }
  return true;
}

namespace {

void check_shapes(const StrictLie2Algebra& l, const Lie2Action& phi, const VectorField& q) {
  check_signature(phi.signature(), q.signature());
  q.require_degree(1, "action");
  if (phi.dim_0() != l.dim_0() || phi.dim_m1() != l.dim_m1()) {
    throw Error("action components do not match the Lie 2-algebra dimensions");
  }
  for (const auto& x : phi.mu0) x.require_degree(0, "mu on L_0");
  for (const auto& x : phi.mu_m1) x.require_degree(-1, "mu on L_-1");
}

AxiomEntry residual(std::string name, const VectorField& r) {
  AxiomEntry e{std::move(name), r.is_zero(), ""};
  if (!e.pass) e.witness = r.to_string();
  return e;
}

}  // namespace

AxiomReport action_check_constraints(const StrictLie2Algebra& l, const Lie2Action& phi, const VectorField& q) {
  check_shapes(l, phi, q);
  const Signature sig = q.signature();
  const int d0 = l.dim_0(), d1 = l.dim_m1();
  const auto& n0 = l.names_0;
  const auto& n1 = l.names_m1;
  auto mu_of0 = [&](const Vec& x) {
    VectorField v(sig);
    for (int a = 0; a < d0; ++a) {
      if (x[a] != 0) v += x[a] * phi.mu0[a];
    }
    return v;
  };
  auto mu_of1 = [&](const Vec& w) {
    VectorField v(sig);
    for (int j = 0; j < d1; ++j) {
      if (w[j] != 0) v += w[j] * phi.mu_m1[j];
    }
    return v;
  };
  // eta(x ^ e_a) for x in L_0.
  auto eta_with = [&](const Vec& x, int a) {
    VectorField v(sig);
    for (int i = 0; i < d0; ++i) {
      if (x[i] != 0) v += x[i] * phi.eta(i, a);
    }
    return v;
  };

  AxiomReport rep;
  for (int j = 0; j < d1; ++j) {
    VectorField r = bracket(q, phi.mu_m1[j]) - mu_of0(delta(l, unit(d1, j)));
    rep.entries.push_back(residual("constr1 " + n1[j], r));
  }
  for (int a = 0; a < d0; ++a) rep.entries.push_back(residual("constr1 " + n0[a], bracket(q, phi.mu0[a])));

  for (int a = 0; a < d0; ++a) {
    for (int b = a + 1; b < d0; ++b) {
      VectorField r = mu_of0(br0(l, unit(d0, a), unit(d0, b))) - bracket(phi.mu0[a], phi.mu0[b]) -
                      bracket(q, phi.eta(a, b));
      rep.entries.push_back(residual("constr2 (" + n0[a] + "," + n0[b] + ")", r));
    }
  }

  for (int j = 0; j < d1; ++j) {
    for (int a = 0; a < d0; ++a) {
      // [w, x] = -[x, w].
      Vec wx = act(l, unit(d0, a), unit(d1, j));
      for (auto& c : wx) c = -c;
      VectorField r = mu_of1(wx) - bracket(phi.mu_m1[j], phi.mu0[a]) - eta_with(delta(l, unit(d1, j)), a);
      rep.entries.push_back(residual("constr3 (" + n1[j] + "," + n0[a] + ")", r));
    }
  }

  for (int a = 0; a < d0; ++a) {
    for (int b = a + 1; b < d0; ++b) {
      for (int c = b + 1; c < d0; ++c) {
        const Vec x = unit(d0, a), y = unit(d0, b), z = unit(d0, c);
        // eta(x ^ v) = -eta(v ^ x).
        auto eta_x = [&](int first, const Vec& v) { return -eta_with(v, first); };
        VectorField r = eta_x(a, br0(l, y, z)) - eta_x(b, br0(l, x, z)) + eta_x(c, br0(l, x, y));
        r += bracket(phi.mu0[a], phi.eta(b, c));
        r -= bracket(phi.mu0[b], phi.eta(a, c));
        r += bracket(phi.mu0[c], phi.eta(a, b));
        rep.entries.push_back(residual("constr4 (" + n0[a] + "," + n0[b] + "," + n0[c] + ")", r));
      }
    }
  }
  return rep;
}

Distribution action_distribution(const StrictLie2Algebra& l, const Lie2Action& phi, const VectorField& q,
                                 const SampleOptions& opt) {
  check_shapes(l, phi, q);
  std::vector<VectorField> m1, g0;
  std::vector<std::string> l1, l0;
  for (int j = 0; j < l.dim_m1(); ++j) {
    if (phi.mu_m1[j].is_zero()) continue;
    m1.push_back(phi.mu_m1[j]);
    l1.push_back("mu(" + l.names_m1[j] + ")");
  }
  for (int a = 0; a < l.dim_0(); ++a) {
    for (int b = a + 1; b < l.dim_0(); ++b) {
      VectorField e = phi.eta(a, b);
      if (e.is_zero()) continue;
      m1.push_back(e);
      l1.push_back("eta(" + l.names_0[a] + "^" + l.names_0[b] + ")");
    }
  }
  for (int a = 0; a < l.dim_0(); ++a) {
    if (phi.mu0[a].is_zero()) continue;
    g0.push_back(phi.mu0[a]);
    l0.push_back("mu(" + l.names_0[a] + ")");
  }
  for (int a = 0; a < l.dim_0(); ++a) {
    for (int b = a + 1; b < l.dim_0(); ++b) {
      VectorField e = bracket(q, phi.eta(a, b));
      if (e.is_zero()) continue;
      g0.push_back(std::move(e));
      l0.push_back("dQ eta(" + l.names_0[a] + "^" + l.names_0[b] + ")");
    }
  }
  return dist_validate(q.signature(), std::move(m1), std::move(g0), opt, std::move(l1), std::move(l0));
}

ClosureCheck action_closure_check(const Distribution& d, const VectorField& q) {
  ClosureCheck out;
  for (std::size_t i = 0; i < d.gens_0.size(); ++i) {
    for (std::size_t j = 0; j < d.gens_m1.size(); ++j) {
      VectorField br = bracket(d.gens_0[i], d.gens_m1[j]);
      if (!module_membership(br, d.gens_m1, d.samples)) {
        out.closed = false;
        out.first = d.label(0, int(i));
        out.second = d.label(-1, int(j));
        out.witness = std::move(br);
        return out;
      }
    }
  }
  out.involutive = dist_is_involutive(d);
  out.q_invariant = dist_is_q_invariant(d, q);
  return out;
}

ActionQuotient action_quotient(const StrictLie2Algebra& l, const Lie2Action& phi, const VectorField& q,
                               const ReductionSetting& s) {
  Distribution d = action_distribution(l, phi, q, s.samples);
  auto closure = action_closure_check(d, q);
  if (!closure) {
    throw ReductionError("[D0, D-1] is not contained in D-1: [" + closure.first + ", " + closure.second +
                         "] = " + closure.witness.to_string());
  }
  if (!d.certified) throw ReductionError("the action distribution is not a distribution: " + d.failure);
  ActionQuotient out;
  const LieAlgebroidData a = extract_algebroid(q);
  for (const auto& g : d.gens_m1) out.b.push_back(field_section(g));
  for (int x = 0; x < l.dim_0(); ++x) {
    if (!phi.mu0[x].is_zero()) out.f.push_back(symbol(phi.mu0[x]));
  }
  for (int x = 0; x < l.dim_0(); ++x) {
    for (int y = x + 1; y < l.dim_0(); ++y) {
      VectorField e = phi.eta(x, y);
      if (!e.is_zero()) out.f.push_back(anchor(a, field_section(e)));
    }
  }
  out.quotient = reduce(q, d, detect_setting(d, s));
  return out;
}

StrictActionReport strict_action_check(const StrictLie2Algebra& l, const Lie2Action& phi, const VectorField& q,
                                       const SampleOptions& opt) {
  check_shapes(l, phi, q);
  if (!phi.eta_is_zero()) throw Error("strict action check requires eta = 0");
  StrictActionReport out;
  const Signature sig = q.signature();
  const int d0 = l.dim_0(), d1 = l.dim_m1();
  const auto& n0 = l.names_0;
  const auto& n1 = l.names_m1;
  for (int j = 0; j < d1; ++j) {
    VectorField r = bracket(q, phi.mu_m1[j]);
    for (int i = 0; i < d0; ++i) {
      if (l.delta(i, j) != 0) r -= l.delta(i, j) * phi.mu0[i];
    }
    out.morphism.entries.push_back(residual("differential " + n1[j], r));
  }
  for (int a = 0; a < d0; ++a) out.morphism.entries.push_back(residual("differential " + n0[a], bracket(q, phi.mu0[a])));
  for (int a = 0; a < d0; ++a) {
    for (int b = a + 1; b < d0; ++b) {
      VectorField r = -bracket(phi.mu0[a], phi.mu0[b]);
      for (int c = 0; c < d0; ++c) {
        if (l.bracket(a, b, c) != 0) r += l.bracket(a, b, c) * phi.mu0[c];
      }
      out.morphism.entries.push_back(residual("bracket (" + n0[a] + "," + n0[b] + ")", r));
    }
  }
  for (int a = 0; a < d0; ++a) {
    for (int j = 0; j < d1; ++j) {
      VectorField r = -bracket(phi.mu0[a], phi.mu_m1[j]);
      for (int k = 0; k < d1; ++k) {
        if (l.action(a, j, k) != 0) r += l.action(a, j, k) * phi.mu_m1[k];
      }
      out.morphism.entries.push_back(residual("module (" + n0[a] + "," + n1[j] + ")", r));
    }
  }
  const int dim = d0 + d1;
  for (const auto& p : sample_points(sig.base, opt)) {
    QMatrix m(sig.base + sig.rank, dim);
    for (int a = 0; a < d0; ++a) {
      auto v = evaluate(phi.mu0[a], p);
      for (int i = 0; i < sig.base; ++i) m(i, a) = v.tangent[i];
    }
    for (int j = 0; j < d1; ++j) {
      auto v = evaluate(phi.mu_m1[j], p);
      for (int b = 0; b < sig.rank; ++b) m(sig.base + b, d0 + j) = v.fiber[b];
    }
    if (rank(m) < dim) {
      out.almost_free = false;
      out.rank_drop = p;
      break;
    }
  }
  return out;
}

}  // namespace nq1
