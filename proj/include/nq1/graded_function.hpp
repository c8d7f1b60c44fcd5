#pragma once

#include "nq1/poly.hpp"

#include <bit>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace nq1 {

/// Ambient data of E[1]: base dimension n and rank r.
struct Signature {
  int base = 0;
  int rank = 0;

  bool operator==(const Signature&) const = default;
};

inline constexpr int kMaxRank = 30;

void check_signature(const Signature& a, const Signature& b);

/// Product of distinct odd generators, kept in strictly increasing index
/// order. Stored as a bitmask: bit a is set iff xi_{a+1} occurs.
class OddMonomial {
public:
  constexpr OddMonomial() = default;
  constexpr explicit OddMonomial(std::uint32_t bits) : bits_(bits) {}

  /// Builds the monomial from 0-based indices; throws on repeats.
  static OddMonomial from_indices(const std::vector<int>& idx);
  static constexpr OddMonomial generator(int a) { return OddMonomial(std::uint32_t{1} << a); }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr int degree() const { return std::popcount(bits_); }
  constexpr bool contains(int a) const { return (bits_ >> a) & 1u; }
  constexpr bool is_unit() const { return bits_ == 0; }
  std::vector<int> indices() const;
  /// Highest index + 1, 0 for the unit.
  int span() const { return bits_ == 0 ? 0 : 32 - std::countl_zero(bits_); }

  constexpr bool operator==(const OddMonomial&) const = default;

private:
  std::uint32_t bits_ = 0;
};

/// Canonical order: by degree, then lexicographically by index list.
struct OddOrder {
  bool operator()(const OddMonomial& a, const OddMonomial& b) const;
};

/// Sign of the permutation sorting the concatenation (a, b) of two
/// disjoint increasing index lists; 0 when they share an index.
int koszul_sign(OddMonomial a, OddMonomial b);

/// All odd monomials of the given degree in r generators, in canonical order.
std::vector<OddMonomial> odd_monomials_of_degree(int rank, int degree);

/// Element of C(E[1]): an exterior polynomial in xi_1..xi_r whose
/// coefficients are polynomials in x_1..x_n. Zero coefficients are never
/// stored, so equality is structural.
class Function {
public:
  using Terms = std::map<OddMonomial, Poly, OddOrder>;

  Function() = default;
  explicit Function(Signature sig) : sig_(sig) {}

  static Function constant(Signature sig, const Scalar& c);
  static Function from_poly(Signature sig, const Poly& p);
  static Function even_generator(Signature sig, int i);
  static Function odd_generator(Signature sig, int a);
  static Function monomial(Signature sig, OddMonomial m, const Poly& coeff);

  const Signature& signature() const { return sig_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Coefficient of the given odd monomial (zero if absent).
  Poly coefficient(OddMonomial m) const;

  /// xi-degree when homogeneous and nonzero.
  std::optional<int> degree() const;
  bool is_homogeneous() const;
  /// Homogeneous components keyed by xi-degree; the zero function has none.
  std::map<int, Function> degree_parts() const;
  /// Component of xi-degree k.
  Function part(int k) const;

  void add_term(OddMonomial m, const Poly& coeff);

  Function& operator+=(const Function& o);
  Function& operator-=(const Function& o);
  Function& operator*=(const Scalar& c);
  friend Function operator+(Function a, const Function& b) { return a += b; }
  friend Function operator-(Function a, const Function& b) { return a -= b; }
  friend Function operator*(const Scalar& c, Function f) { return f *= c; }
  friend Function operator*(const Poly& p, const Function& f);
  /// Graded (Koszul-signed) product.
  friend Function operator*(const Function& a, const Function& b);
  Function operator-() const;

  bool operator==(const Function& o) const;

  /// d/dx_i (0-based).
  Function derivative_even(int i) const;
  /// Left derivative d/dxi_a (0-based): removing xi_a from position p
  /// contributes (-1)^p.
  Function derivative_odd(int a) const;
  /// Specializes every coefficient at p; the result keeps the signature and
  /// has constant coefficients.
  Function evaluate_base(std::span<const Scalar> p) const;

  /// Canonical text form, e.g. `3/2*x1^2*xi1^xi3`.
  std::string to_string() const;

private:
  Signature sig_;
  Terms terms_;
};

/// Renders c * x^e * xi^m without sign handling: returns (negative, body).
std::pair<bool, std::string> render_term(const Scalar& c, const Exponent& e, OddMonomial m);

}  // namespace nq1
