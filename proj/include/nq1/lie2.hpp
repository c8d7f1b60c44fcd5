#pragma once

#include "nq1/reduction.hpp"

#include <string>
#include <vector>

namespace nq1 {

/// DGLA L = L_{-1} (+) L_0 with bases w_1.. and e_1..:
///   delta(w_j) = sum_i delta(i, j) e_i,
///   [e_a, e_b] = sum_c k(a, b, c) e_c,
///   [e_a, w_j] = sum_l m(a, j, l) w_l,  [w_j, e_a] = -[e_a, w_j].
class StrictLie2Algebra {
public:
  StrictLie2Algebra() = default;
  StrictLie2Algebra(int dim_m1, int dim_0);

  int dim_m1() const { return d1_; }
  int dim_0() const { return d0_; }

  const Scalar& delta(int i, int j) const { return delta_.at(std::size_t(i) * d1_ + j); }
  void set_delta(int i, int j, const Scalar& v) { delta_.at(std::size_t(i) * d1_ + j) = v; }
  const Scalar& bracket(int a, int b, int c) const { return k_.at((std::size_t(a) * d0_ + b) * d0_ + c); }
  /// Sets [e_a, e_b] coefficient and its antisymmetric partner.
  void set_bracket(int a, int b, int c, const Scalar& v);
  const Scalar& action(int a, int j, int l) const { return m_.at((std::size_t(a) * d1_ + j) * d1_ + l); }
  void set_action(int a, int j, int l, const Scalar& v) { m_.at((std::size_t(a) * d1_ + j) * d1_ + l) = v; }

  /// Basis names used in reports; default w1.., e1...
  std::vector<std::string> names_m1;
  std::vector<std::string> names_0;

private:
  int d1_ = 0;
  int d0_ = 0;
  std::vector<Scalar> delta_;
  std::vector<Scalar> k_;
  std::vector<Scalar> m_;
};

/// Jacobi on L_0, the module identity on L_{-1}, delta[x,w] = [x, delta w]
/// and [delta w, w'] + [delta w', w] = 0.
AxiomReport check_lie2(const StrictLie2Algebra& l);

/// Components of an L-infinity action: mu on both bases and eta on the
/// pairs e_a ^ e_b, a < b, in lexicographic order.
class Lie2Action {
public:
  Lie2Action() = default;
  Lie2Action(Signature sig, int dim_m1, int dim_0);

  const Signature& signature() const { return sig_; }
  int dim_m1() const { return static_cast<int>(mu_m1.size()); }
  int dim_0() const { return static_cast<int>(mu0.size()); }

  /// eta(e_a ^ e_b), antisymmetric, zero on the diagonal.
  VectorField eta(int a, int b) const;
  void set_eta(int a, int b, const VectorField& v);
  bool eta_is_zero() const;

  std::vector<VectorField> mu_m1;
  std::vector<VectorField> mu0;

private:
  std::size_t pair_index(int a, int b) const;

  Signature sig_;
  std::vector<VectorField> eta_;
};

/// Checks constr1 (d_Q mu = mu delta), constr2 on pairs of L_0 basis
/// vectors, constr3 on mixed pairs, constr4 on triples.
AxiomReport action_check_constraints(const StrictLie2Algebra& l, const Lie2Action& phi, const VectorField& q);

/// D = span{mu(L), eta(L_0 ^ L_0), [Q, eta(L_0 ^ L_0)]}, zero generators
/// dropped, validated as a distribution.
Distribution action_distribution(const StrictLie2Algebra& l, const Lie2Action& phi, const VectorField& q,
                                 const SampleOptions& opt = {});

struct ClosureCheck {
  bool closed = true;
  std::string first;
  std::string second;
  VectorField witness;
  /// Filled when closed: the conclusions [Q, D] in D and D involutive.
  InvolutivityCheck involutive;
  QInvarianceCheck q_invariant;

  explicit operator bool() const { return closed; }
};

/// [D0, D-1] in D-1 on generators; when it holds, also verifies the
/// consequences, [Q, D] in D and involutivity, independently.
ClosureCheck action_closure_check(const Distribution& d, const VectorField& q);

struct ActionQuotient {
  QuotientResult quotient;
  std::vector<Section> b;
  std::vector<BaseVectorField> f;
};

ActionQuotient action_quotient(const StrictLie2Algebra& l, const Lie2Action& phi, const VectorField& q,
                               const ReductionSetting& s);

struct StrictActionReport {
  AxiomReport morphism;
  bool almost_free = true;
  std::optional<Point> rank_drop;
};

/// eta must vanish. Checks that mu preserves delta and brackets and tests
/// injectivity of L -> T_m M (+) A_m at the sample points.
StrictActionReport strict_action_check(const StrictLie2Algebra& l, const Lie2Action& phi, const VectorField& q,
                                       const SampleOptions& opt = {});

}  // namespace nq1
