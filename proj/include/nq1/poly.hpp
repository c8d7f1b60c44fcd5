#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nq1 {

/// Ground field. mpq_class keeps every value canonical (lowest terms,
/// positive denominator).
using Scalar = mpq_class;
using Point = std::vector<Scalar>;
using Exponent = std::vector<int>;

/// Base class for every error the kernel raises on bad input.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class SignatureMismatch : public Error {
public:
  using Error::Error;
};

class DegreeError : public Error {
public:
  using Error::Error;
};

/// Internal consistency failure (a computation produced something a
/// theorem says it cannot).
class InternalError : public Error {
public:
  using Error::Error;
};

std::string scalar_to_string(const Scalar& c);

/// Graded lexicographic order, larger monomials first. This is the
/// iteration (and rendering) order of Poly terms and also the monomial
/// order used for exact division.
struct ExponentOrder {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

/// Sparse multivariate polynomial in x_1..x_n with rational coefficients.
///
/// A polynomial in zero variables is a constant and is promoted silently
/// when combined with a polynomial in n variables, so `Poly{}` works as a
/// universal zero.
class Poly {
public:
  using Terms = std::map<Exponent, Scalar, ExponentOrder>;

  Poly() = default;
  explicit Poly(int nvars) : nvars_(nvars) {}
  Poly(int nvars, const Scalar& c);

  static Poly constant(int nvars, const Scalar& c) { return Poly(nvars, c); }
  static Poly variable(int nvars, int i);
  static Poly monomial(int nvars, Exponent e, const Scalar& c);

  int nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Scalar constant_term() const;
  /// -1 for the zero polynomial.
  int total_degree() const;
  /// Largest exponent of x_i appearing.
  int degree_in(int i) const;
  bool depends_on(int i) const { return degree_in(i) > 0; }

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Scalar& c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(const Scalar& c, Poly a) { return a *= c; }
  friend Poly operator*(Poly a, const Scalar& c) { return a *= c; }
  Poly operator-() const;

  bool operator==(const Poly& o) const;

  Poly derivative(int i) const;
  Scalar evaluate(std::span<const Scalar> p) const;
  /// Exact quotient, or nullopt when `d` does not divide `*this`.
  std::optional<Poly> divide_exact(const Poly& d) const;
  /// Drops the variables whose indices are listed (they must not occur)
  /// and renumbers the rest in order.
  Poly drop_variables(const std::vector<int>& dropped) const;

  /// Adds c*x^e.
  void add_term(const Exponent& e, const Scalar& c);

  std::string to_string() const;

private:
  void promote(int n);
  void check_compatible(const Poly& o);

  int nvars_ = 0;
  Terms terms_;
};

/// Renders a single monomial x^e (no coefficient); empty string for 1.
std::string exponent_to_string(const Exponent& e);

}  // namespace nq1
