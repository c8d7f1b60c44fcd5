#pragma once

#include "nq1/algebroid.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nq1 {

struct SampleOptions {
  int samples = 8;
  std::uint64_t seed = 0;
};

/// Origin followed by `samples` pseudo-random rational points with
/// numerators in [-7, 7] and denominators in [1, 4], drawn from
/// std::mt19937_64(seed). Deterministic across platforms.
std::vector<Point> sample_points(int n, const SampleOptions& opt);

/// exact: holds as a polynomial identity. sampled: holds wherever a
/// certain nonzero polynomial does not vanish, which includes every
/// sample point.
enum class Certainty { exact, sampled };
const char* to_string(Certainty c);

/// Solution x of cols * x = rhs over Q(x), accepted when it is
/// polynomial or its denominator is nonzero on every sample point.
struct SpanSolution {
  bool solvable = false;
  Certainty certainty = Certainty::exact;
  std::vector<Poly> numerators;
  Poly denominator;
  std::string reason;
};

SpanSolution solve_in_span(const PolyMatrix& cols, const std::vector<Poly>& rhs,
                           const std::vector<Point>& samples);

struct Membership {
  bool member = false;
  Certainty certainty = Certainty::exact;
  /// V = (1/denominator) sum_j coefficients[j] * gens[j].
  std::vector<Function> coefficients;
  Poly denominator;
  std::string reason;

  explicit operator bool() const { return member; }
};

/// Decides V in span_{C(M)}(gens). Each homogeneous part of V is solved
/// separately over Q(x), one unknown per (generator, odd monomial).
Membership module_membership(const VectorField& v, const std::vector<VectorField>& gens,
                             const std::vector<Point>& samples);

/// Locally generated submodule of vector fields with generators in degree
/// -1 and 0. `certified` means generator evaluations are independent at
/// every sample point (and everywhere, when certainty is exact).
struct Distribution {
  Signature sig;
  std::vector<VectorField> gens_m1;
  std::vector<VectorField> gens_0;
  std::vector<std::string> labels_m1;
  std::vector<std::string> labels_0;
  std::vector<Point> samples;

  bool certified = false;
  Certainty certainty = Certainty::sampled;
  std::optional<Point> failing_point;
  std::string failure;

  std::vector<VectorField> generators() const;
  std::string label(int degree, int index) const;
};

/// Checks pointwise independence: symbolic rank over Q(x), then rank at
/// each sample point. Non-homogeneous generators or wrong degrees throw.
Distribution dist_validate(Signature sig, std::vector<VectorField> gens_m1,
                           std::vector<VectorField> gens_0, const SampleOptions& opt = {},
                           std::vector<std::string> labels_m1 = {},
                           std::vector<std::string> labels_0 = {});

Membership module_membership(const VectorField& v, const Distribution& d);

struct InvolutivityCheck {
  bool involutive = true;
  std::string first;
  std::string second;
  VectorField bracket;
  Certainty certainty = Certainty::exact;

  explicit operator bool() const { return involutive; }
};

/// Checks [D0, D-1] and then [D0, D0] generator brackets for membership.
InvolutivityCheck dist_is_involutive(const Distribution& d);

struct QInvarianceCheck {
  bool invariant = true;
  std::string generator;
  VectorField bracket;
  Certainty certainty = Certainty::exact;

  explicit operator bool() const { return invariant; }
};

QInvarianceCheck dist_is_q_invariant(const Distribution& d, const VectorField& q);

/// Mutual membership of the two generator sets.
bool module_equal(const Distribution& a, const Distribution& b);

/// Classical data of a distribution in the global frame:
///   B: r x k, columns span B in E;
///   complement: frame indices completing B to a frame of E;
///   F: generators of the base distribution;
///   nabla[a]: (r-k) x (r-k) with
///     nabla_{F[a]} ebar_{complement[g]} = sum_d nabla[a](d, g) ebar_{complement[d]}.
struct ClassicalTriple {
  Signature sig;
  PolyMatrix B;
  std::vector<int> complement;
  std::vector<BaseVectorField> F;
  std::vector<PolyMatrix> nabla;

  int quotient_rank() const { return static_cast<int>(complement.size()); }
};

/// Raised when classical data cannot be extracted or rebuilt; carries a
/// witness expression.
class ClassicalError : public Error {
public:
  ClassicalError(const std::string& what, std::string witness = {})
      : Error(witness.empty() ? what : what + ": " + witness), witness(std::move(witness)) {}
  std::string witness;
};

/// Greedy completion of the columns of B(p) to a basis of Q^r by standard
/// vectors, in index order.
std::vector<int> greedy_complement(const PolyMatrix& b, const Point& p);

/// Writes a section as (coordinates along complement, coordinates along B).
/// Throws ClassicalError when the coordinates are not polynomial.
std::pair<std::vector<Poly>, std::vector<Poly>> split_section(const ClassicalTriple& t, const Section& s,
                                                              const std::vector<Point>& samples);

ClassicalTriple dist_to_classical(const Distribution& d);

struct TripleCheck {
  bool ok = true;
  std::string failure;
};

/// F involutive and nabla flat, both as symbolic identities.
TripleCheck check_triple(const ClassicalTriple& t, const std::vector<Point>& samples);

/// Checks Y_a(Phi) + nabla[a] Phi = 0 for every generator.
TripleCheck check_flat_frame(const ClassicalTriple& t, const PolyMatrix& phi);

/// Builds the distribution of a triple from a flat frame Phi of E/B
/// (columns in complement coordinates). Degree 0 generators are the
/// degree 0 fields with symbol F[a] killing the lifted frame [B | lifts].
Distribution classical_to_dist(const ClassicalTriple& t, const PolyMatrix& phi,
                               const SampleOptions& opt = {});

/// P = sum_i xt_i X^i + 1/2 sum_{i,k} xt_i xt_k b^{ik} for the frame a_i
/// (columns of `frame`) with dual coordinates xt_i.
struct TaylorDecomposition {
  std::vector<Function> dual;
  std::vector<VectorField> x;
  std::vector<std::vector<VectorField>> b;
  VectorField reassembled;
};

TaylorDecomposition taylor_expand_degree1(const VectorField& p, const PolyMatrix& frame);

}  // namespace nq1
