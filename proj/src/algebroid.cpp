#include "nq1/algebroid.hpp"

namespace nq1 {

LieAlgebroidData::LieAlgebroidData(int base, int rank)
    : n_(base), r_(rank),
      c_(std::size_t(rank) * rank * rank, Poly(base)),
      rho_(std::size_t(rank) * base, Poly(base)) {
  if (base < 0 || rank < 0 || rank > kMaxRank) throw Error("invalid algebroid dimensions");
}

void LieAlgebroidData::set_structure(int i, int j, int k, const Poly& value) {
  if (i < 0 || j < 0 || k < 0 || i >= r_ || j >= r_ || k >= r_) throw Error("structure index out of range");
  Poly v(n_);
  v += value;
  if (i == j) {
    if (!v.is_zero()) throw Error("c_ii^k must vanish");
    return;
  }
  c_[cidx(i, j, k)] = v;
  c_[cidx(j, i, k)] = -v;
}

void LieAlgebroidData::set_anchor(int i, int a, const Poly& value) {
  if (i < 0 || a < 0 || i >= r_ || a >= n_) throw Error("anchor index out of range");
  Poly v(n_);
  v += value;
  rho_[std::size_t(i) * n_ + a] = v;
}

bool LieAlgebroidData::operator==(const LieAlgebroidData& o) const {
  return n_ == o.n_ && r_ == o.r_ && c_ == o.c_ && rho_ == o.rho_;
}

VectorField build_q(const LieAlgebroidData& a) {
  const Signature sig = a.signature();
  const int n = a.base(), r = a.rank();
  std::vector<Function> even(n, Function(sig)), odd(r, Function(sig));
  // 1/2 xi_j xi_i c_ij^k summed over i != j equals sum_{i<j} xi_j xi_i c_ij^k
  // = -sum_{i<j} c_ij^k xi_i xi_j.
  for (int i = 0; i < r; ++i) {
    for (int j = i + 1; j < r; ++j) {
      const OddMonomial m = OddMonomial::from_indices({i, j});
      for (int k = 0; k < r; ++k) {
        const Poly& c = a.structure(i, j, k);
        if (!c.is_zero()) odd[k].add_term(m, -c);
      }
    }
  }
  for (int i = 0; i < r; ++i) {
    for (int al = 0; al < n; ++al) {
      const Poly& p = a.anchor(i, al);
      if (!p.is_zero()) even[al].add_term(OddMonomial::generator(i), p);
    }
  }
  return VectorField(sig, std::move(even), std::move(odd));
}

LieAlgebroidData extract_structure(const VectorField& q) {
  q.require_degree(1, "extract_algebroid");
  const Signature sig = q.signature();
  LieAlgebroidData out(sig.base, sig.rank);
  for (int i = 0; i < sig.rank; ++i) {
    VectorField qi = bracket(q, VectorField::d_odd(sig, i));
    for (int al = 0; al < sig.base; ++al) {
      out.set_anchor(i, al, qi.even(al).coefficient(OddMonomial{}));
    }
    for (int j = i + 1; j < sig.rank; ++j) {
      VectorField qij = bracket(qi, VectorField::d_odd(sig, j));
      for (int k = 0; k < sig.rank; ++k) out.set_structure(i, j, k, qij.odd(k).coefficient(OddMonomial{}));
    }
  }
  return out;
}

LieAlgebroidData extract_algebroid(const VectorField& q) {
  auto h = is_homological(q);
  if (!h) throw NotHomological(h.witness);
  return extract_structure(q);
}

bool AxiomReport::pass() const { return first_failure() == nullptr; }

const AxiomEntry* AxiomReport::first_failure() const {
  for (const auto& e : entries) {
    if (!e.pass) return &e;
  }
  return nullptr;
}

Poly base_apply(const BaseVectorField& u, const Poly& f) {
  Poly out(f.nvars());
  for (std::size_t a = 0; a < u.size(); ++a) {
    if (!u[a].is_zero()) out += u[a] * f.derivative(int(a));
  }
  return out;
}

BaseVectorField base_bracket(const BaseVectorField& u, const BaseVectorField& v) {
  BaseVectorField w(u.size());
  for (std::size_t a = 0; a < u.size(); ++a) w[a] = base_apply(u, v[a]) - base_apply(v, u[a]);
  return w;
}

BaseVectorField anchor(const LieAlgebroidData& a, const Section& s) {
  BaseVectorField out(a.base(), Poly(a.base()));
  for (int i = 0; i < a.rank(); ++i) {
    if (s[i].is_zero()) continue;
    for (int al = 0; al < a.base(); ++al) out[al] += s[i] * a.anchor(i, al);
  }
  return out;
}

Section section_bracket(const LieAlgebroidData& a, const Section& s, const Section& t) {
  const int r = a.rank();
  Section out(r, Poly(a.base()));
  const BaseVectorField rs = anchor(a, s), rt = anchor(a, t);
  for (int k = 0; k < r; ++k) out[k] = base_apply(rs, t[k]) - base_apply(rt, s[k]);
  for (int i = 0; i < r; ++i) {
    if (s[i].is_zero()) continue;
    for (int j = 0; j < r; ++j) {
      if (t[j].is_zero() || i == j) continue;
      Poly st = s[i] * t[j];
      for (int k = 0; k < r; ++k) {
        if (!a.structure(i, j, k).is_zero()) out[k] += st * a.structure(i, j, k);
      }
    }
  }
  return out;
}

std::string section_to_string(const Section& s, const char* frame) {
  std::string out;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k].is_zero()) continue;
    std::string coef = s[k].to_string();
    std::string basis = std::string(frame) + std::to_string(k + 1);
    std::string piece;
    if (coef == "1") {
      piece = basis;
    } else if (coef == "-1") {
      piece = "-" + basis;
    } else if (s[k].terms().size() == 1) {
      piece = coef + "*" + basis;
    } else {
      piece = "(" + coef + ")*" + basis;
    }
    if (!out.empty()) {
      out += piece[0] == '-' ? " - " + piece.substr(1) : " + " + piece;
    } else {
      out = piece;
    }
  }
  return out.empty() ? "0" : out;
}

namespace {

Section frame_section(int n, int r, int i) {
  Section s(r, Poly(n));
  s[i] = Poly(n, 1);
  return s;
}

bool is_zero_section(const Section& s) {
  for (const auto& p : s) {
    if (!p.is_zero()) return false;
  }
  return true;
}

Section add(Section a, const Section& b) {
  for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
  return a;
}

Section jacobiator(const LieAlgebroidData& a, const Section& x, const Section& y, const Section& z) {
  Section j = section_bracket(a, section_bracket(a, x, y), z);
  j = add(j, section_bracket(a, section_bracket(a, y, z), x));
  return add(j, section_bracket(a, section_bracket(a, z, x), y));
}

std::vector<Poly> test_monomials(int n) {
  std::vector<Poly> out;
  out.push_back(Poly(n, 1));
  for (int i = 0; i < n; ++i) {
    out.push_back(Poly::variable(n, i));
    for (int j = i; j < n; ++j) out.push_back(Poly::variable(n, i) * Poly::variable(n, j));
  }
  return out;
}

std::string frame_tuple(std::initializer_list<int> idx) {
  std::string s = "(";
  bool first = true;
  for (int i : idx) {
    if (!first) s += ",";
    s += std::to_string(i + 1);
    first = false;
  }
  return s + ")";
}

}  // namespace

AxiomReport verify_algebroid_axioms(const LieAlgebroidData& a) {
  AxiomReport rep;
  const int n = a.base(), r = a.rank();

  AxiomEntry anti{"antisymmetry", true, ""};
  for (int i = 0; i < r && anti.pass; ++i) {
    for (int j = 0; j < r && anti.pass; ++j) {
      for (int k = 0; k < r; ++k) {
        if (!(a.structure(i, j, k) == -a.structure(j, i, k))) {
          anti.pass = false;
          anti.witness = "c" + frame_tuple({i, j, k}) + " != -c" + frame_tuple({j, i, k});
          break;
        }
      }
    }
  }
  rep.entries.push_back(anti);

  for (int i = 0; i < r; ++i) {
    for (int j = i + 1; j < r; ++j) {
      Section ei = frame_section(n, r, i), ej = frame_section(n, r, j);
      BaseVectorField lhs = anchor(a, section_bracket(a, ei, ej));
      BaseVectorField rhs = base_bracket(anchor(a, ei), anchor(a, ej));
      AxiomEntry e{"anchor_morphism " + frame_tuple({i, j}), true, ""};
      Section diff(n);
      for (int al = 0; al < n; ++al) diff[al] = lhs[al] - rhs[al];
      if (!is_zero_section(diff)) {
        e.pass = false;
        e.witness = "rho([e" + std::to_string(i + 1) + ",e" + std::to_string(j + 1) + "]) - [rho(e" +
                    std::to_string(i + 1) + "),rho(e" + std::to_string(j + 1) +
                    ")] = " + section_to_string(diff, "d/dx");
      }
      rep.entries.push_back(std::move(e));
    }
  }

  for (int i = 0; i < r; ++i) {
    for (int j = i + 1; j < r; ++j) {
      for (int k = j + 1; k < r; ++k) {
        Section jac = jacobiator(a, frame_section(n, r, i), frame_section(n, r, j), frame_section(n, r, k));
        AxiomEntry e{"jacobi " + frame_tuple({i, j, k}), true, ""};
        if (!is_zero_section(jac)) {
          e.pass = false;
          e.witness = "Jac" + frame_tuple({i, j, k}) + " = " + section_to_string(jac);
        }
        rep.entries.push_back(std::move(e));
      }
    }
  }

  // Leibniz: Jac(e_i, e_j, f e_k) - f Jac(e_i, e_j, e_k)
  //   = (rho[e_i,e_j] - [rho e_i, rho e_j])(f) e_k.
  if (n > 0) {
    const auto tests = test_monomials(n);
    for (int i = 0; i < r; ++i) {
      for (int j = i + 1; j < r; ++j) {
        for (int k = 0; k < r; ++k) {
          AxiomEntry e{"leibniz " + frame_tuple({i, j, k}), true, ""};
          Section base = jacobiator(a, frame_section(n, r, i), frame_section(n, r, j), frame_section(n, r, k));
          for (const Poly& f : tests) {
            Section fk(r, Poly(n));
            fk[k] = f;
            Section jac = jacobiator(a, frame_section(n, r, i), frame_section(n, r, j), fk);
            for (int m = 0; m < r; ++m) jac[m] -= f * base[m];
            if (!is_zero_section(jac)) {
              e.pass = false;
              e.witness = "f = " + f.to_string() + ": " + section_to_string(jac);
              break;
            }
          }
          rep.entries.push_back(std::move(e));
        }
      }
    }
  }
  return rep;
}

VectorField section_field(Signature sig, const Section& s) {
  if (static_cast<int>(s.size()) != sig.rank) throw SignatureMismatch("section has wrong rank");
  std::vector<Function> even(sig.base, Function(sig)), odd;
  odd.reserve(sig.rank);
  for (const auto& p : s) odd.push_back(Function::from_poly(sig, p));
  return VectorField(sig, std::move(even), std::move(odd));
}

Section field_section(const VectorField& x) {
  x.require_degree(-1, "field_section");
  const Signature& sig = x.signature();
  Section s;
  s.reserve(sig.rank);
  for (int a = 0; a < sig.rank; ++a) {
    Poly p(sig.base);
    p += x.odd(a).coefficient(OddMonomial{});
    s.push_back(std::move(p));
  }
  return s;
}

VectorField derived_bracket(const VectorField& q, const VectorField& a, const VectorField& b) {
  q.require_degree(1, "derived_bracket");
  a.require_degree(-1, "derived_bracket");
  b.require_degree(-1, "derived_bracket");
  return bracket(bracket(q, a), b);
}

Function anchor_apply(const VectorField& q, const VectorField& a, const Function& f) {
  q.require_degree(1, "anchor_apply");
  a.require_degree(-1, "anchor_apply");
  if (!f.is_zero() && f.degree() != 0) throw DegreeError("anchor_apply: function must have xi-degree 0");
  return apply(bracket(q, a), f);
}

CDORep cdo_from_degree0(const VectorField& x0) {
  x0.require_degree(0, "cdo_from_degree0");
  const Signature& sig = x0.signature();
  CDORep d{symbol(x0), PolyMatrix(sig.rank, sig.rank)};
  for (int b = 0; b < sig.rank; ++b) {
    for (int g = 0; g < sig.rank; ++g) {
      Poly p(sig.base);
      p += x0.odd(g).coefficient(OddMonomial::generator(b));
      d.matrix(b, g) = std::move(p);
    }
  }
  return d;
}

CDORep cdo_dual(const CDORep& d) {
  const int r = d.matrix.rows();
  CDORep out{d.symbol, PolyMatrix(r, r)};
  for (int b = 0; b < r; ++b) {
    for (int g = 0; g < r; ++g) out.matrix(b, g) = -d.matrix(g, b);
  }
  return out;
}

Section cdo_apply(const CDORep& d, const Section& s) {
  const int r = d.matrix.rows();
  const int n = static_cast<int>(d.symbol.size());
  Section out(r, Poly(n));
  for (int g = 0; g < r; ++g) {
    out[g] = base_apply(d.symbol, s[g]);
    for (int b = 0; b < r; ++b) {
      if (!s[b].is_zero() && !d.matrix(b, g).is_zero()) out[g] -= s[b] * d.matrix(b, g);
    }
  }
  return out;
}

}  // namespace nq1
