#pragma once

#include "nq1/graded_function.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nq1 {

/// Graded derivation of C(E[1]), stored by its values on the generators:
///   X = sum_i a_i d/dx_i + sum_a b_a d/dxi_a,
/// with a_i = X(x_i) and b_a = X(xi_a). A homogeneous field of degree d
/// has deg a_i = d and deg b_a = d + 1. Inhomogeneous fields are allowed;
/// `parts()` splits them.
class VectorField {
public:
  VectorField() = default;
  explicit VectorField(Signature sig);
  VectorField(Signature sig, std::vector<Function> even, std::vector<Function> odd);

  static VectorField zero(Signature sig) { return VectorField(sig); }
  /// d/dx_i (0-based).
  static VectorField d_even(Signature sig, int i);
  /// d/dxi_a (0-based).
  static VectorField d_odd(Signature sig, int a);

  const Signature& signature() const { return sig_; }
  const Function& even(int i) const { return even_.at(i); }
  const Function& odd(int a) const { return odd_.at(a); }
  const std::vector<Function>& even_coefficients() const { return even_; }
  const std::vector<Function>& odd_coefficients() const { return odd_; }

  bool is_zero() const;
  bool is_homogeneous() const { return homogeneous_; }
  /// Degree of a nonzero homogeneous field.
  std::optional<int> degree() const { return degree_; }
  /// Homogeneous components keyed by degree.
  std::map<int, VectorField> parts() const;
  /// Throws DegreeError unless the field is zero or homogeneous of degree d.
  void require_degree(int d, const char* what) const;

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  VectorField operator-() const;
  friend VectorField operator*(const Scalar& c, const VectorField& x);
  /// Left multiplication by a function: (f X)(g) = f X(g).
  friend VectorField operator*(const Function& f, const VectorField& x);

  bool operator==(const VectorField& o) const;

  /// Canonical text form, e.g. `x1*d/dx3 - d/dx2 + xi1*d/dxi3`.
  std::string to_string() const;

private:
  void refresh();

  Signature sig_;
  std::vector<Function> even_;
  std::vector<Function> odd_;
  bool homogeneous_ = true;
  std::optional<int> degree_;
};

/// Point of E[1] (+) TM over a base point: the evaluation of a degree -1
/// or degree 0 field.
struct TangentFiberVector {
  Point point;
  std::vector<Scalar> fiber;    // E_p component, length r
  std::vector<Scalar> tangent;  // T_pM component, length n

  bool is_zero() const;
  bool operator==(const TangentFiberVector&) const = default;
};

/// X(f).
Function apply(const VectorField& x, const Function& f);

/// Graded commutator [X, Y] = X o Y - (-1)^{|X||Y|} Y o X, extended
/// bilinearly over homogeneous parts.
VectorField bracket(const VectorField& x, const VectorField& y);

/// Image in (E[1] (+) TM)_p. Degree -1: (f_a(p)) in E_p; degree 0: the
/// symbol g_i(p) in T_pM (the xi d/dxi part lies in C_{>=1} chi and is
/// dropped). Other degrees are rejected.
TangentFiberVector evaluate(const VectorField& x, const Point& p);

/// Result of checking [Q, Q] = 0.
struct HomologicalCheck {
  bool homological = false;
  VectorField square;         // [Q, Q]
  std::string witness;        // first nonzero coefficient, e.g. "[Q,Q](xi3) = ..."

  explicit operator bool() const { return homological; }
};

HomologicalCheck is_homological(const VectorField& q);

/// Symbol of a field: its d/dx coefficients restricted to xi-degree 0.
std::vector<Poly> symbol(const VectorField& x);

}  // namespace nq1
