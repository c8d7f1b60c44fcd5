#include "support.hpp"

#include "doctest.h"

using namespace nq1;
using namespace nq1::testing;

namespace {

const Signature s3{3, 3};
const Signature p3{0, 3};

VectorField q_su2() { return build_q(lie_algebra(su2_constants())); }

VectorField de_rham(int n) {
  LieAlgebroidData t(n, n);
  for (int i = 0; i < n; ++i) t.set_anchor(i, i, Poly(n, 1));
  return build_q(t);
}

int degree_of(const VectorField& v, int fallback) { return v.degree().value_or(fallback); }

}  // namespace

TEST_CASE("apply on examples") {
  const Signature s2{1, 2};
  Function xi1 = Function::odd_generator(s2, 0), xi2 = Function::odd_generator(s2, 1);
  CHECK(apply(VectorField::d_odd(s2, 0), xi1 * xi2) == xi2);
  Function x1 = Function::even_generator(s2, 0);
  VectorField v = xi1 * VectorField::d_even(s2, 0);
  CHECK(apply(v, x1 * x1) == Scalar(2) * x1 * xi1);
  Function e1 = Function::odd_generator(p3, 0), e2 = Function::odd_generator(p3, 1), e3 = Function::odd_generator(p3, 2);
  CHECK(apply(q_su2(), e1) == e3 * e2);
}

TEST_CASE("commutator examples") {
  VectorField d1 = VectorField::d_odd(p3, 0);
  CHECK(bracket(d1, d1).is_zero());
  CHECK(bracket(q_su2(), q_su2()).is_zero());
  CHECK(bracket(de_rham(3), VectorField::d_odd(s3, 0)) == VectorField::d_even(s3, 0));
}

TEST_CASE("evaluation") {
  VectorField d1 = VectorField::d_odd(s3, 0);
  Point p{Scalar(5), Scalar(-1), Scalar(1, 2)};
  auto v = evaluate(d1, p);
  CHECK(v.fiber == std::vector<Scalar>{1, 0, 0});
  CHECK(v.tangent == std::vector<Scalar>{0, 0, 0});
  VectorField mu = parse_vector_field("x1*d/dx3 - d/dx2 + xi1*d/dxi3", s3);
  auto w = evaluate(mu, p);
  CHECK(w.tangent == std::vector<Scalar>{0, -1, 5});
  VectorField z = parse_vector_field("xi2*d/dxi3", s3);
  CHECK(evaluate(z, p).is_zero());
  CHECK_THROWS_AS(evaluate(de_rham(3), p), DegreeError);
}

TEST_CASE("homological check with witness") {
  CHECK(is_homological(q_su2()).homological);
  CHECK(is_homological(de_rham(3)).homological);
  LieAlgebroidData a(0, 3);
  a.set_structure(0, 1, 2, Poly(0, 1));
  a.set_structure(0, 2, 0, Poly(0, 1));
  auto h = is_homological(build_q(a));
  CHECK_FALSE(h.homological);
  CHECK_FALSE(h.square.is_zero());
  CHECK_FALSE(h.witness.empty());
  CHECK_THROWS_AS(is_homological(VectorField::d_odd(p3, 0)), DegreeError);
}

TEST_CASE("rendering") {
  CHECK(q_su2().to_string() == "-xi2^xi3*d/dxi1 + xi1^xi3*d/dxi2 - xi1^xi2*d/dxi3");
  CHECK(VectorField(s3).to_string() == "0");
  VectorField v = parse_vector_field("(x1 + x2)*d/dx1 - 2*xi1*d/dxi2", s3);
  CHECK(v.to_string() == "(x1 + x2)*d/dx1 - 2*xi1*d/dxi2");
}

TEST_CASE("graded antisymmetry [500 instances]") {
  Rng g(21);
  for (int t = 0; t < 500; ++t) {
    Signature s = random_signature(g, 2, 3);
    const int p = uniform(g, -1, 1), q = uniform(g, -1, 1);
    VectorField x = random_field(g, s, p), y = random_field(g, s, q);
    Scalar sign = (degree_of(x, p) * degree_of(y, q)) % 2 ? 1 : -1;
    CHECK(bracket(x, y) == sign * bracket(y, x));
  }
}

TEST_CASE("graded Jacobi [500 instances]") {
  Rng g(22);
  for (int t = 0; t < 500; ++t) {
    Signature s = random_signature(g, 2, 3);
    const int p = uniform(g, -1, 1), q = uniform(g, -1, 1), r = uniform(g, -1, 1);
    VectorField x = random_field(g, s, p, 1), y = random_field(g, s, q, 1), z = random_field(g, s, r, 1);
    Scalar sign = (p * q) % 2 ? -1 : 1;
    CHECK(bracket(x, bracket(y, z)) == bracket(bracket(x, y), z) + sign * bracket(y, bracket(x, z)));
  }
}

TEST_CASE("commutator acts as the graded commutator of derivations [500 instances]") {
  Rng g(23);
  for (int t = 0; t < 500; ++t) {
    Signature s = random_signature(g, 2, 3);
    const int p = uniform(g, -1, 1), q = uniform(g, -1, 1);
    VectorField x = random_field(g, s, p), y = random_field(g, s, q);
    Function f = random_function(g, s, uniform(g, 0, s.rank)) + random_function(g, s, uniform(g, 0, s.rank));
    Scalar sign = (p * q) % 2 ? -1 : 1;
    CHECK(apply(bracket(x, y), f) == apply(x, apply(y, f)) - sign * apply(y, apply(x, f)));
  }
}

TEST_CASE("graded Leibniz rule [500 instances]") {
  Rng g(24);
  for (int t = 0; t < 500; ++t) {
    Signature s = random_signature(g, 2, 3);
    const int p = uniform(g, -1, 1), k = uniform(g, 0, s.rank);
    VectorField x = random_field(g, s, p);
    Function f = random_function(g, s, k), h = random_function(g, s, uniform(g, 0, s.rank));
    Scalar sign = (p * k) % 2 ? -1 : 1;
    CHECK(apply(x, f * h) == apply(x, f) * h + sign * (f * apply(x, h)));
  }
}

TEST_CASE("d_Q squares to zero [500 instances]") {
  Rng g(25);
  const auto pool = homological_pool();
  for (const auto& q : pool) REQUIRE(is_homological(q).homological);
  for (int t = 0; t < 500; ++t) {
    const VectorField& q = pool[t % pool.size()];
    const Signature s = q.signature();
    VectorField y = random_field(g, s, uniform(g, -1, 1));
    CHECK(bracket(q, bracket(q, y)).is_zero());
    Function f = random_function(g, s, uniform(g, 0, s.rank));
    CHECK(apply(q, apply(q, f)).is_zero());
  }
}

TEST_CASE("coefficient round trip") {
  Rng g(26);
  for (int t = 0; t < 200; ++t) {
    Signature s = random_signature(g, 3, 3);
    VectorField x = random_field(g, s, uniform(g, -1, 2));
    std::vector<Function> even, odd;
    for (int i = 0; i < s.base; ++i) even.push_back(apply(x, Function::even_generator(s, i)));
    for (int a = 0; a < s.rank; ++a) odd.push_back(apply(x, Function::odd_generator(s, a)));
    CHECK(VectorField(s, even, odd) == x);
  }
}

TEST_CASE("inhomogeneous fields split into parts") {
  VectorField v = VectorField::d_odd(s3, 0) + VectorField::d_even(s3, 1);
  CHECK_FALSE(v.is_homogeneous());
  auto parts = v.parts();
  REQUIRE(parts.size() == 2);
  CHECK(parts.at(-1) == VectorField::d_odd(s3, 0));
  CHECK(parts.at(0) == VectorField::d_even(s3, 1));
}
