#include "support.hpp"

#include "doctest.h"

#include <filesystem>

using namespace nq1;
using namespace nq1::testing;

namespace {

const Signature p3{0, 3};
const Signature t3{3, 3};

std::vector<std::string> corpus_files() {
  std::vector<std::string> names;
  for (const auto& e : std::filesystem::directory_iterator(NQ1_CORPUS_DIR)) {
    if (e.path().extension() == ".nq1") names.push_back(e.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

void check_error(const std::string& text, int line, int col) {
  try {
    parse_document(text);
    FAIL("no parse error for: " << text);
  } catch (const ParseError& e) {
    CHECK(e.line == line);
    CHECK(e.col == col);
  }
}

}  // namespace

TEST_CASE("su(2) document") {
  Document d = parse_document("manifold { base = 0; rank = 3 } algebroid { c[1,2,3]=1; c[2,3,1]=1; c[3,1,2]=1 }");
  CHECK(d.signature() == p3);
  REQUIRE(d.algebroids.size() == 1);
  CHECK(d.algebroids[0].value == lie_algebra(su2_constants()));
  CHECK(d.resolve_q("Q") == build_q(lie_algebra(su2_constants())));
}

TEST_CASE("empty input") {
  CHECK(parse_document("").empty());
  CHECK(parse_document("  # only a comment\n\n").empty());
  CHECK(render(parse_document("")) == "");
}

TEST_CASE("de Rham field on T[1]R^3") {
  Document d = parse_document("manifold { base = 3; rank = 3 }\nq_field { xi1*d/dx1 + xi2*d/dx2 + xi3*d/dx3 }\n");
  REQUIRE(d.q_fields.size() == 1);
  CHECK(is_homological(d.q_fields[0].value).homological);
  CHECK(extract_algebroid(d.q_fields[0].value).anchor(2, 2) == Poly(3, 1));
}

TEST_CASE("expressions") {
  CHECK(std::get<Function>(parse_expression("x1^3", t3)) == Function::from_poly(t3, Poly::variable(3, 0) * Poly::variable(3, 0) * Poly::variable(3, 0)));
  Function w = std::get<Function>(parse_expression("xi2^xi1", t3));
  CHECK(w == -(Function::odd_generator(t3, 0) * Function::odd_generator(t3, 1)));
  CHECK(std::get<Function>(parse_expression("(x1 + 1/2)^2", t3)).to_string() == "x1^2 + x1 + 1/4");
  CHECK(std::get<Function>(parse_expression("[d/dx1, x1^2*xi2]", t3)).to_string() == "2*x1*xi2");
  CHECK(std::get<Function>(parse_expression("x1/2", t3)).to_string() == "1/2*x1");
  VectorField v = parse_vector_field("[x1*d/dx2, d/dx1]", t3);
  CHECK(v == -VectorField::d_even(t3, 1));
  std::map<std::string, VectorField> env{{"X", VectorField::d_odd(t3, 0)}};
  CHECK(parse_vector_field("2*X", t3, env) == Scalar(2) * VectorField::d_odd(t3, 0));
  CHECK_THROWS_AS(parse_vector_field("x1", t3), Error);
  CHECK_THROWS_AS(parse_expression("x1/x2", t3), ParseError);
  CHECK_THROWS_AS(parse_expression("Y", t3), ParseError);
  CHECK_THROWS_AS(parse_expression("x4", t3), ParseError);
}

TEST_CASE("diagnostics carry line and column") {
  check_error("manifold { base = 1; rank = 1 }\nq_field { xi1*d/dx1 + }", 2, 23);
  check_error("manifold { base = 1; rank = 1 }\nq_field { xi2*d/dx1 }", 2, 11);
  check_error("manifold { base = 1; rank = 1 }\ndistribution { q = Nope\ngen = d/dxi1 }", 2, 20);
  check_error("bogus {}", 1, 1);
  check_error("manifold { base = 1; rank = 1 }\nalgebroid { c[1,1,1] = 1 }", 2, 13);
  check_error("manifold { base = 1 }", 1, 1);
}

TEST_CASE("corpus renders to a fixed point") {
  const auto files = corpus_files();
  CHECK(files.size() >= 10);
  for (const auto& f : files) {
    CAPTURE(f);
    const std::string once = render(corpus(f));
    CHECK(render(parse_document(once)) == once);
  }
}

TEST_CASE("rendered blocks round trip on random algebroids") {
  Rng g(81);
  for (int t = 0; t < 200; ++t) {
    LieAlgebroidData a = random_algebroid(g, uniform(g, 0, 3), uniform(g, 1, 3));
    const Signature s = a.signature();
    const std::string head = "manifold { base = " + std::to_string(s.base) + "; rank = " + std::to_string(s.rank) + " }\n";
    Document da = parse_document(head + render_algebroid_block(a, "A"));
    CHECK(da.algebroids.at(0).value == a);
    const VectorField q = build_q(a);
    Document dq = parse_document(head + render_q_block(q, "Q"));
    CHECK(dq.q_fields.at(0).value == q);
    CHECK(parse_vector_field(q.to_string(), s) == q);
  }
}

TEST_CASE("functions render and re-parse") {
  Rng g(82);
  for (int t = 0; t < 300; ++t) {
    Signature s = random_signature(g, 3, 3);
    Function f = random_function(g, s, uniform(g, 0, s.rank)) + random_function(g, s, uniform(g, 0, s.rank));
    CHECK(std::get<Function>(parse_expression(f.to_string(), s)) == f);
  }
}

TEST_CASE("imfoliation blocks") {
  Document d = corpus("sheared_r2.nq1");
  REQUIRE(d.imfoliations.size() == 1);
  IMFoliation i = to_imfoliation(d, d.imfoliations[0]);
  CHECK(i.triple.complement == std::vector<int>{0, 1});
  CHECK(i.triple.nabla.at(0)(0, 1) == Poly(2, 1));
  CHECK(imf_check_axioms(i).pass());
}

TEST_CASE("settings") {
  Document d = parse_document("manifold { base = 2; rank = 1 }\nsettings { samples = 3; seed = 9; max_xi_degree = 1; max_base_degree = 2; fiber_coords = [2] }");
  CHECK(d.settings.samples == 3);
  CHECK(d.settings.seed == 9u);
  CHECK(d.settings.max_xi_degree == 1);
  CHECK(d.settings.max_base_degree == 2);
  CHECK(d.settings.fiber_coords == std::vector<int>{1});
}
