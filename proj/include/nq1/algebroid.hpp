#pragma once

#include "nq1/linalg.hpp"
#include "nq1/vector_field.hpp"

#include <string>
#include <vector>

namespace nq1 {

/// Section of the trivial bundle E = M x R^r: r polynomial components.
using Section = std::vector<Poly>;
/// Vector field on the base: n polynomial components.
using BaseVectorField = std::vector<Poly>;

/// Lie algebroid data in a global frame e_1..e_r over coordinates x_1..x_n:
/// [e_i, e_j] = c_ij^k e_k and rho(e_i) = rho_i^a d/dx_a. Indices are
/// 0-based in the API and 1-based in text.
class LieAlgebroidData {
public:
  LieAlgebroidData() = default;
  LieAlgebroidData(int base, int rank);

  int base() const { return n_; }
  int rank() const { return r_; }
  Signature signature() const { return {n_, r_}; }

  const Poly& structure(int i, int j, int k) const { return c_.at(cidx(i, j, k)); }
  /// Sets c_ij^k and c_ji^k = -value. Throws for i == j with a nonzero value.
  void set_structure(int i, int j, int k, const Poly& value);
  const Poly& anchor(int i, int a) const { return rho_.at(std::size_t(i) * n_ + a); }
  void set_anchor(int i, int a, const Poly& value);

  bool operator==(const LieAlgebroidData& o) const;

private:
  std::size_t cidx(int i, int j, int k) const { return (std::size_t(i) * r_ + j) * r_ + k; }

  int n_ = 0;
  int r_ = 0;
  std::vector<Poly> c_;
  std::vector<Poly> rho_;
};

/// Q = 1/2 xi_j xi_i c_ij^k d/dxi_k + rho_i^a xi_i d/dx_a.
VectorField build_q(const LieAlgebroidData& a);

/// Reads c and rho off any degree 1 field through the derived brackets.
/// Linear in Q; no homological check.
LieAlgebroidData extract_structure(const VectorField& q);

/// Raised when a non-homological field is passed where a Lie algebroid is
/// required. `witness` is the first nonzero coefficient of [Q,Q].
class NotHomological : public Error {
public:
  NotHomological(const std::string& witness)
      : Error("vector field is not homological: " + witness), witness(witness) {}
  std::string witness;
};

/// extract_structure for homological Q; throws NotHomological otherwise.
LieAlgebroidData extract_algebroid(const VectorField& q);

struct AxiomEntry {
  std::string axiom;
  bool pass = true;
  std::string witness;
};

struct AxiomReport {
  std::vector<AxiomEntry> entries;

  bool pass() const;
  /// First failing entry, or nullptr.
  const AxiomEntry* first_failure() const;
};

/// Checks the algebroid axioms directly on sections, independently of Q:
/// antisymmetry, anchor is a bracket morphism on frame pairs, Jacobi on
/// frame triples, and Jacobi with one slot scaled by each monomial of
/// degree <= 2 (the Leibniz rule).
AxiomReport verify_algebroid_axioms(const LieAlgebroidData& a);

Section section_bracket(const LieAlgebroidData& a, const Section& s, const Section& t);
BaseVectorField anchor(const LieAlgebroidData& a, const Section& s);
BaseVectorField base_bracket(const BaseVectorField& u, const BaseVectorField& v);
Poly base_apply(const BaseVectorField& u, const Poly& f);
std::string section_to_string(const Section& s, const char* frame = "e");

/// Degree -1 field sum_a s_a d/dxi_a and back.
VectorField section_field(Signature sig, const Section& s);
Section field_section(const VectorField& x);

/// [[Q,a],b] for degree -1 fields a, b.
VectorField derived_bracket(const VectorField& q, const VectorField& a, const VectorField& b);
/// [[Q,a],f] for a degree -1 field a and a function f of xi-degree 0.
Function anchor_apply(const VectorField& q, const VectorField& a, const Function& f);

/// Covariant differential operator on E in the frame e_1..e_r:
///   D(s)_g = symbol(s_g) - sum_b s_b M(b,g).
/// For a degree 0 field X0 = g_i d/dx_i + sum M(b,g) xi_b d/dxi_g this is
/// the action s -> [X0, s] on degree -1 fields, i.e.
/// [X0, d/dxi_b] = -sum_g M(b,g) d/dxi_g.
struct CDORep {
  BaseVectorField symbol;
  PolyMatrix matrix;

  bool operator==(const CDORep&) const = default;
};

CDORep cdo_from_degree0(const VectorField& x0);
/// Dual CDO on E*: same symbol, matrix -M^T, so that
/// <D*w, s> + <w, D s> = symbol(<w, s>).
CDORep cdo_dual(const CDORep& d);
Section cdo_apply(const CDORep& d, const Section& s);

}  // namespace nq1
