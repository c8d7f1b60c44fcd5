#include "nq1/imfoliation.hpp"

namespace nq1 {

namespace {

Poly lift(int n, const Poly& p) {
  Poly q(n);
  q += p;
  return q;
}

std::string pair_tag(int a, int b) { return "(" + std::to_string(a + 1) + "," + std::to_string(b + 1) + ")"; }

}  // namespace

PolyMatrix imf_flat_frame(const IMFoliation& i) {
  if (i.flat_frame) return *i.flat_frame;
  auto ff = flat_frame_solve(i.triple);
  if (!ff.ok) {
    throw ClassicalError("no flat frame available (" + ff.failure +
                         "); check the corresponding distribution with analyze-distribution instead");
  }
  return ff.frame;
}

AxiomReport imf_check_axioms(const IMFoliation& im, const SampleOptions& opt) {
  const ClassicalTriple& t = im.triple;
  const LieAlgebroidData& a = im.algebroid;
  check_signature(t.sig, a.signature());
  const int n = t.sig.base, r = t.sig.rank, k = t.B.cols(), m = t.quotient_rank();
  if (t.B.rows() != r || k + m != r) throw ClassicalError("B and the complement do not fit the rank");
  const auto samples = sample_points(n, opt);
  AxiomReport rep;

  auto tc = check_triple(t, samples);
  rep.entries.push_back({"triple", tc.ok, tc.failure});
  const PolyMatrix phi = imf_flat_frame(im);
  if (auto fc = check_flat_frame(t, phi); !fc.ok) throw ClassicalError("flat frame rejected", fc.failure);

  std::vector<Section> bs, ss;
  for (int j = 0; j < k; ++j) {
    Section s(r);
    for (int i = 0; i < r; ++i) s[i] = lift(n, t.B(i, j));
    bs.push_back(std::move(s));
  }
  for (int j = 0; j < m; ++j) {
    Section s(r, Poly(n));
    for (int g = 0; g < m; ++g) s[t.complement[g]] += lift(n, phi(g, j));
    ss.push_back(std::move(s));
  }
  PolyMatrix bm(r, k), fm(n, static_cast<int>(t.F.size())), frame(r, r);
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < r; ++i) bm(i, j) = bs[j][i];
  }
  for (std::size_t f = 0; f < t.F.size(); ++f) {
    for (int i = 0; i < n; ++i) fm(i, int(f)) = lift(n, t.F[f][i]);
  }
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) frame(i, j) = Poly(n);
  }
  for (int g = 0; g < m; ++g) frame(t.complement[g], g) = Poly(n, 1);
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < r; ++i) frame(i, m + j) = bm(i, j);
  }

  auto in_b = [&](const Section& s) { return solve_in_span(bm, s, samples).solvable; };
  auto in_f = [&](const BaseVectorField& y) {
    std::vector<Poly> v;
    for (const auto& p : y) v.push_back(lift(n, p));
    return solve_in_span(fm, v, samples).solvable;
  };

  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      Section br = section_bracket(a, bs[i], bs[j]);
      AxiomEntry e{"B_closed " + pair_tag(i, j), in_b(br), ""};
      if (!e.pass) e.witness = "[b" + std::to_string(i + 1) + ",b" + std::to_string(j + 1) + "] = " + section_to_string(br);
      rep.entries.push_back(std::move(e));
    }
  }

  for (int j = 0; j < m; ++j) {
    for (int l = j + 1; l < m; ++l) {
      Section br = section_bracket(a, ss[j], ss[l]);
      AxiomEntry e{"axiom_i " + pair_tag(j, l), true, ""};
      auto sol = solve_in_span(frame, br, samples);
      if (!sol.solvable) throw InternalError("adapted frame does not span E");
      const Poly den = lift(n, sol.denominator);
      for (std::size_t f = 0; f < t.F.size() && e.pass; ++f) {
        const Poly yden = base_apply(t.F[f], den);
        for (int g = 0; g < m; ++g) {
          Poly v = den * base_apply(t.F[f], lift(n, sol.numerators[g])) - yden * lift(n, sol.numerators[g]);
          for (int h = 0; h < m; ++h) v += den * (t.nabla[f](g, h) * lift(n, sol.numerators[h]));
          if (!v.is_zero()) {
            e.pass = false;
            e.witness = "[s" + std::to_string(j + 1) + ",s" + std::to_string(l + 1) + "] = " + section_to_string(br) +
                        " is not flat along F" + std::to_string(f + 1);
            break;
          }
        }
      }
      rep.entries.push_back(std::move(e));
    }
  }

  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < m; ++j) {
      Section br = section_bracket(a, bs[i], ss[j]);
      AxiomEntry e{"axiom_ii " + pair_tag(i, j), in_b(br), ""};
      if (!e.pass) e.witness = "[b" + std::to_string(i + 1) + ",s" + std::to_string(j + 1) + "] = " + section_to_string(br);
      rep.entries.push_back(std::move(e));
    }
  }

  for (int i = 0; i < k; ++i) {
    BaseVectorField y = anchor(a, bs[i]);
    AxiomEntry e{"axiom_iii " + std::to_string(i + 1), in_f(y), ""};
    if (!e.pass) e.witness = "rho(b" + std::to_string(i + 1) + ") = " + section_to_string(y, "d/dx");
    rep.entries.push_back(std::move(e));
  }

  for (int j = 0; j < m; ++j) {
    BaseVectorField rs = anchor(a, ss[j]);
    for (std::size_t f = 0; f < t.F.size(); ++f) {
      BaseVectorField y = base_bracket(rs, t.F[f]);
      AxiomEntry e{"axiom_iv " + pair_tag(j, int(f)), in_f(y), ""};
      if (!e.pass) {
        e.witness = "[rho(s" + std::to_string(j + 1) + "),F" + std::to_string(f + 1) + "] = " + section_to_string(y, "d/dx");
      }
      rep.entries.push_back(std::move(e));
    }
  }

  const VectorField q = build_q(a);
  for (int i = 0; i < k; ++i) {
    BaseVectorField y = symbol(bracket(q, section_field(t.sig, bs[i])));
    AxiomEntry e{"axiom_iii_q " + std::to_string(i + 1), in_f(y), ""};
    if (!e.pass) e.witness = "symbol([Q,b" + std::to_string(i + 1) + "]) = " + section_to_string(y, "d/dx");
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

IMFoliation imf_from_distribution(const Distribution& d, const VectorField& q) {
  if (!d.certified) throw ClassicalError("not a distribution", d.failure);
  if (auto qi = dist_is_q_invariant(d, q); !qi) {
    throw ClassicalError("distribution is not Q-invariant", "[Q, " + qi.generator + "] = " + qi.bracket.to_string());
  }
  IMFoliation out;
  out.algebroid = extract_algebroid(q);
  out.triple = dist_to_classical(d);
  if (auto ff = flat_frame_solve(out.triple); ff.ok) out.flat_frame = std::move(ff.frame);
  return out;
}

IMDistribution distribution_from_imf(const IMFoliation& i, const SampleOptions& opt) {
  IMDistribution out;
  out.distribution = classical_to_dist(i.triple, imf_flat_frame(i), opt);
  out.involutive = dist_is_involutive(out.distribution);
  out.q_invariant = dist_is_q_invariant(out.distribution, build_q(i.algebroid));
  return out;
}

}  // namespace nq1
