// Acceptance runner: one line per criterion with tolerance and timing.

#include "support.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace nq1;
using namespace nq1::testing;
using json = nlohmann::ordered_json;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

const Signature p3{0, 3};
const Signature t3{3, 3};

Outcome su2_round_trip() {
  Outcome o;
  const LieAlgebroidData a = lie_algebra(su2_constants());
  const VectorField q = build_q(a);
  const VectorField golden = parse_vector_field("xi2^xi1*d/dxi3 + xi1^xi3*d/dxi2 + xi3^xi2*d/dxi1", p3);
  o.require(q == golden, "build_q differs from the golden field: " + q.to_string());
  o.require(bracket(q, q).is_zero(), "[Q,Q] != 0");
  o.require(extract_algebroid(q) == a, "extract_algebroid does not recover the input");
  o.detail = o.pass ? "Q = " + q.to_string() : o.detail;
  return o;
}

Outcome su2_invariants() {
  Outcome o;
  const VectorField q = build_q(lie_algebra(su2_constants()));
  const VectorField d1 = VectorField::d_odd(p3, 0);
  const Distribution d = dist_validate(p3, {d1}, {bracket(q, d1)});
  o.require(!d.certified, "module reported as a distribution");
  const InvariantBasis inv = invariant_functions(d, {});
  const std::vector<Function> expected{Function::constant(p3, 1),
                                       Function::monomial(p3, OddMonomial::from_indices({1, 2}), Poly(0, 1))};
  o.require(inv.basis == expected, "invariant basis differs");
  for (const auto& f : inv.basis) o.require(apply(q, f).is_zero(), "Q does not vanish on " + f.to_string());
  const QuotientResult r = reduce(q, d, {});
  o.require(r.singular && r.generator_degrees == std::map<int, int>{{2, 1}}, "invariants not generated in degree 2");
  if (o.pass) o.detail = "basis {1, xi2^xi3}, module-only: " + d.failure;
  return o;
}

struct ActionInput {
  Document doc;
  StrictLie2Algebra l;
  Lie2Action phi;
  VectorField q;
};

ActionInput action_input(const std::string& file) {
  ActionInput in{corpus(file), {}, {}, {}};
  const ActionBlock& a = in.doc.actions.at(0);
  in.l = *in.doc.find_lie2(a.algebra);
  in.phi = a.action;
  in.q = in.doc.resolve_q(a.q);
  return in;
}

Outcome notinv_pipeline() {
  Outcome o;
  ActionInput in = action_input("notinv.nq1");
  o.require(action_check_constraints(in.l, in.phi, in.q).pass(), "constraints fail");
  const Distribution image = block_distribution(in.doc, in.doc.distributions.at(0), {});
  const InvolutivityCheck inv = dist_is_involutive(image);
  const QInvarianceCheck qi = dist_is_q_invariant(image, in.q);
  o.require(!inv.involutive && !inv.bracket.is_zero(), "image span reported involutive");
  o.require(!qi.invariant && !qi.bracket.is_zero(), "image span reported Q-invariant");
  const Distribution d = action_distribution(in.l, in.phi, in.q);
  o.require(d.certified, "completed D not certified");
  o.require(dist_is_involutive(d).involutive, "completed D not involutive");
  o.require(dist_is_q_invariant(d, in.q).invariant, "completed D not Q-invariant");
  const ActionQuotient aq = action_quotient(in.l, in.phi, in.q, {});
  o.require(aq.quotient.algebroid == LieAlgebroidData(0, 2), "quotient is not abelian R^2 over a point");
  if (o.pass) {
    o.detail = "image span witnesses [" + inv.first + ", " + inv.second + "] = " + inv.bracket.to_string() + " and [Q, " +
               qi.generator + "] = " + qi.bracket.to_string() + "; quotient rank 2, c = 0";
  }
  return o;
}

Outcome notin_counterexample() {
  Outcome o;
  ActionInput in = action_input("notin.nq1");
  o.require(action_check_constraints(in.l, in.phi, in.q).pass(), "constraints fail");
  const Distribution d = action_distribution(in.l, in.phi, in.q);
  const ClosureCheck c = action_closure_check(d, in.q);
  o.require(!c.closed, "closure check passed");
  // [X, [X, Y]] on the base, moved to degree -1.
  const Poly zero(3), one(3, 1), x1 = Poly::variable(3, 0);
  const BaseVectorField x{one, zero, zero};
  const BaseVectorField y{zero, -x1, Scalar(1, 2) * x1 * x1};
  const BaseVectorField xxy = base_bracket(x, base_bracket(x, y));
  o.require(xxy == BaseVectorField{zero, zero, one}, "[X,[X,Y]] != d/dx3");
  const VectorField expected = -section_field(t3, xxy);
  o.require(c.witness == expected, "witness " + c.witness.to_string() + " != " + expected.to_string());
  o.require(!module_membership(c.witness, d.gens_m1, d.samples).member, "witness lies in D-1");
  if (o.pass) o.detail = "[" + c.first + ", " + c.second + "] = " + c.witness.to_string() + " not in D-1";
  return o;
}

Outcome bijection_instances() {
  Outcome o;
  int cases = 0;
  for (const auto& e : std::filesystem::directory_iterator(NQ1_CORPUS_DIR)) {
    if (e.path().extension() != ".nq1") continue;
    const Document doc = corpus(e.path().filename().string());
    for (const auto& b : doc.imfoliations) {
      const IMFoliation imf = to_imfoliation(doc, b);
      if (!imf_check_axioms(imf).pass()) continue;
      ++cases;
      const std::string tag = e.path().filename().string();
      const IMDistribution d = distribution_from_imf(imf);
      o.require(d.involutive.involutive, tag + ": D not involutive");
      o.require(d.q_invariant.invariant, tag + ": D not Q-invariant");
      o.require(dist_is_involutive(d.distribution).involutive, tag + ": recheck involutive");
      o.require(dist_is_q_invariant(d.distribution, build_q(imf.algebroid)).invariant, tag + ": recheck Q-invariant");
      const IMFoliation back = imf_from_distribution(d.distribution, build_q(imf.algebroid));
      o.require(module_equal(distribution_from_imf(back).distribution, d.distribution), tag + ": round trip differs");
    }
  }
  o.require(cases >= 4, "only " + std::to_string(cases) + " corpus IM-foliations pass the axioms");
  if (o.pass) o.detail = std::to_string(cases) + " corpus IM-foliations";
  return o;
}

Outcome oracle_agreement() {
  Outcome o;
  Rng g(1001);
  const int total = 400;
  int valid = 0;
  for (int t = 0; t < total; ++t) {
    const LieAlgebroidData a = mixed_algebroid(g);
    const bool h = is_homological(build_q(a)).homological;
    const bool ax = verify_algebroid_axioms(a).pass();
    valid += h;
    o.require(h == ax, "disagreement on instance " + std::to_string(t));
  }
  if (o.pass) o.detail = std::to_string(total) + " instances, " + std::to_string(valid) + " algebroids, 100% agreement";
  return o;
}

Outcome property_suite() {
  Outcome o;
  Rng g(1002);
  const int count = 500;
  auto parity = [](int a, int b) { return (a * b) % 2 != 0; };
  for (int t = 0; t < count; ++t) {
    const Signature s = random_signature(g, 3, 3);
    const int p = uniform(g, 0, s.rank), q = uniform(g, 0, s.rank);
    const Function f = random_function(g, s, p), h = random_function(g, s, q), k = random_function(g, s, uniform(g, 0, s.rank));
    o.require(f * h == (parity(p, q) ? Scalar(-1) : Scalar(1)) * (h * f), "graded commutativity");
    o.require((f * h) * k == f * (h * k), "associativity");
  }
  for (int t = 0; t < count; ++t) {
    const Signature s = random_signature(g, 2, 3);
    const int d = uniform(g, -1, 1), k = uniform(g, 0, s.rank);
    const VectorField x = random_field(g, s, d);
    const Function f = random_function(g, s, k), h = random_function(g, s, uniform(g, 0, s.rank));
    o.require(apply(x, f * h) == apply(x, f) * h + (parity(d, k) ? Scalar(-1) : Scalar(1)) * (f * apply(x, h)), "Leibniz");
  }
  for (int t = 0; t < count; ++t) {
    const Signature s = random_signature(g, 2, 3);
    const int a = uniform(g, -1, 1), b = uniform(g, -1, 1), c = uniform(g, -1, 1);
    const VectorField x = random_field(g, s, a, 1), y = random_field(g, s, b, 1), z = random_field(g, s, c, 1);
    o.require(bracket(x, bracket(y, z)) ==
                  bracket(bracket(x, y), z) + (parity(a, b) ? Scalar(-1) : Scalar(1)) * bracket(y, bracket(x, z)),
              "graded Jacobi");
  }
  const auto pool = homological_pool();
  for (int t = 0; t < count; ++t) {
    const VectorField& q = pool[t % pool.size()];
    const Signature s = q.signature();
    const VectorField y = random_field(g, s, uniform(g, -1, 1));
    const Function f = random_function(g, s, uniform(g, 0, s.rank));
    o.require(bracket(q, bracket(q, y)).is_zero() && apply(q, apply(q, f)).is_zero(), "d_Q^2 = 0");
  }
  if (o.pass) o.detail = "5 properties x " + std::to_string(count) + " instances";
  return o;
}

Dense random_subspace(Rng& g, int dim, int k) {
  for (;;) {
    Dense m(dim, std::vector<Scalar>(k));
    for (auto& row : m) {
      for (auto& v : row) v = uniform(g, -2, 2);
    }
    PolyMatrix pm(dim, k);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < k; ++j) pm(i, j) = Poly(0, m[i][j]);
    }
    if (rank(pm) == k) return m;
  }
}

Outcome quotient_oracle() {
  Outcome o;
  Rng g(1003);
  const int pairs = 80;
  for (int t = 0; t < pairs; ++t) {
    const int family = t % 3;
    Constants c;
    Dense ideal;
    int dim = 0;
    if (family == 0) {
      dim = uniform(g, 1, 4);
      c = zero_constants(dim);
      ideal = random_subspace(g, dim, uniform(g, 0, dim));
    } else if (family == 1) {
      dim = uniform(g, 3, 4);
      c = heisenberg_constants(dim - 3);
      // Any subspace containing the centre e3 is an ideal.
      const int extra = uniform(g, 0, dim - 1);
      Dense sub = random_subspace(g, dim, extra);
      ideal.assign(dim, std::vector<Scalar>());
      for (int i = 0; i < dim; ++i) ideal[i].push_back(i == 2 ? 1 : 0);
      for (int i = 0; i < dim; ++i) ideal[i].insert(ideal[i].end(), sub[i].begin(), sub[i].end());
      PolyMatrix pm(dim, extra + 1);
      for (int i = 0; i < dim; ++i) {
        for (int j = 0; j <= extra; ++j) pm(i, j) = Poly(0, ideal[i][j]);
      }
      if (rank(pm) != extra + 1) {
        for (auto& row : ideal) row.resize(1);
      }
    } else {
      dim = 3;
      c = su2_constants();
      ideal = uniform(g, 0, 1) ? Dense(3, std::vector<Scalar>()) : Dense{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    }
    // Random basis change of g, with the ideal rewritten in the new basis.
    const Dense p = random_gl(g, dim), pinv = dense_inverse(p);
    const Constants cb = change_basis(c, p);
    const int k = ideal.empty() ? 0 : static_cast<int>(ideal[0].size());
    Dense ib(dim, std::vector<Scalar>(k, Scalar(0)));
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < k; ++j) {
        for (int l = 0; l < dim; ++l) ib[i][j] += pinv[i][l] * ideal[l][j];
      }
    }
    const Signature s{0, dim};
    ClassicalTriple tr{s, PolyMatrix(dim, k), {}, {}, {}};
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < k; ++j) tr.B(i, j) = Poly(0, ib[i][j]);
    }
    tr.complement = greedy_complement(tr.B, Point{});
    const Distribution d = classical_to_dist(tr, PolyMatrix::identity(tr.quotient_rank()));
    const QuotientResult r = reduce(build_q(lie_algebra(cb)), d, detect_setting(d));
    const ReferenceQuotient ref = reference_quotient(cb, ib);
    o.require(ref.complement == tr.complement, "complements differ on pair " + std::to_string(t));
    o.require(r.algebroid == lie_algebra(ref.c), "structure constants differ on pair " + std::to_string(t));
  }
  if (o.pass) o.detail = std::to_string(pairs) + " pairs (abelian, Heisenberg, su(2))";
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char ch : s) out += ch == '\'' ? std::string("'\\''") : std::string(1, ch);
  return out + "'";
}

int run_cli(const std::string& cmd, const std::filesystem::path& file, const std::filesystem::path& out) {
  const std::string line = shell_quote(NQ1_BINARY) + " " + cmd + " " + shell_quote(file.string()) + " --json " +
                           shell_quote(out.string()) + " >/dev/null 2>&1";
  const int rc = std::system(line.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::map<std::string, VectorField> generator_map(const json& gens, Signature s) {
  std::map<std::string, VectorField> m;
  for (const auto& g : gens) m[g["label"].get<std::string>()] = parse_vector_field(g["field"].get<std::string>(), s);
  return m;
}

std::vector<VectorField> of_degree(const json& gens, Signature s, int degree) {
  std::vector<VectorField> out;
  for (const auto& g : gens) {
    if (g["degree"] == degree) out.push_back(parse_vector_field(g["field"].get<std::string>(), s));
  }
  return out;
}

/// Re-parses every vector field witness in a report and checks that it
/// reproduces the failure. Returns the number of witnesses checked.
int reverify(const std::string& cmd, const Document& doc, const json& j, Outcome& o, const std::string& tag) {
  int checked = 0;
  const Signature s = doc.signature();
  const std::vector<Point> pts = sample_points(s.base, {});
  for (const char* key : {"witness", "built_q_witness"}) {
    if (!j.contains(key) || j[key].get<std::string>().rfind("[Q,Q](", 0) != 0) continue;
    // "[Q,Q](xi3) = <function>"
    const std::string w = j[key];
    const std::string gen = w.substr(6, w.find(')') - 6);
    const bool odd = gen.rfind("xi", 0) == 0;
    const int idx = std::stoi(gen.substr(odd ? 2 : 1)) - 1;
    const Function value = std::get<Function>(parse_expression(w.substr(w.find(" = ") + 3), s));
    const VectorField q = std::string(key) == "witness" ? doc.resolve_q("") : build_q(doc.algebroids.at(0).value);
    const Function g = odd ? Function::odd_generator(s, idx) : Function::even_generator(s, idx);
    o.require(!value.is_zero() && apply(bracket(q, q), g) == value, tag + ": [Q,Q] witness does not reproduce");
    ++checked;
  }
  if (cmd == "analyze-distribution") {
    for (std::size_t b = 0; b < j["distributions"].size(); ++b) {
      const json& dj = j["distributions"][b];
      const auto gens = generator_map(dj["generators"], s);
      std::vector<VectorField> all;
      for (const auto& [_, v] : gens) all.push_back(v);
      if (dj.contains("involutive") && dj["involutive"]["status"] == "fail") {
        const json& w = dj["involutive"];
        const VectorField br = parse_vector_field(w["bracket"].get<std::string>(), s);
        o.require(br == bracket(gens.at(w["pair"][0]), gens.at(w["pair"][1])), tag + ": involutivity bracket differs");
        o.require(!module_membership(br, all, pts).member, tag + ": involutivity witness is a member");
        ++checked;
      }
      if (dj.contains("q_invariant") && dj["q_invariant"]["status"] == "fail") {
        const json& w = dj["q_invariant"];
        const VectorField q = doc.resolve_q(doc.distributions.at(b).q);
        const VectorField br = parse_vector_field(w["bracket"].get<std::string>(), s);
        o.require(br == bracket(q, gens.at(w["generator"])), tag + ": Q-invariance bracket differs");
        o.require(!module_membership(br, all, pts).member, tag + ": Q-invariance witness is a member");
        ++checked;
      }
    }
  }
  if (cmd == "check-action") {
    for (const auto& aj : j["actions"]) {
      for (const auto& e : aj["constraints"]) {
        if (e.contains("witness")) {
          o.require(!parse_vector_field(e["witness"].get<std::string>(), s).is_zero(), tag + ": zero residual");
          ++checked;
        }
      }
      const json& c = aj["closure"];
      if (c["status"] == "fail") {
        const auto gens = generator_map(aj["distribution"]["generators"], s);
        const VectorField w = parse_vector_field(c["witness"].get<std::string>(), s);
        o.require(w == bracket(gens.at(c["pair"][0]), gens.at(c["pair"][1])), tag + ": closure bracket differs");
        o.require(!module_membership(w, of_degree(aj["distribution"]["generators"], s, -1), pts).member,
                  tag + ": closure witness lies in D-1");
        ++checked;
      }
    }
  }
  return checked;
}

Outcome cli_determinism() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / ("nq1_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  int runs = 0, witnesses = 0;
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(NQ1_CORPUS_DIR)) {
    if (e.path().extension() == ".nq1") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    const Document doc = parse_document(slurp(f));
    for (const auto& cmd : command_names()) {
      const auto a = dir / "a.json", b = dir / "b.json";
      std::filesystem::remove(a);
      std::filesystem::remove(b);
      const int ra = run_cli(cmd, f, a), rb = run_cli(cmd, f, b);
      const std::string tag = f.filename().string() + " " + cmd;
      o.require(ra == rb && ra >= 0 && ra <= 2, tag + ": exit codes differ");
      const std::string ja = slurp(a), jb = slurp(b);
      o.require(!ja.empty() && ja == jb, tag + ": JSON differs between runs");
      ++runs;
      if (ra == 1 && !ja.empty()) witnesses += reverify(cmd, doc, json::parse(ja), o, tag);
    }
  }
  std::filesystem::remove_all(dir);
  o.require(witnesses > 0, "no witnesses found");
  if (o.pass) {
    o.detail = std::to_string(files.size()) + " files x " + std::to_string(command_names().size()) + " commands (" +
               std::to_string(runs) + " pairs), " + std::to_string(witnesses) + " witnesses re-verified";
  }
  return o;
}

struct Criterion {
  int id;
  std::string name;
  std::string tolerance;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "su(2) round trip", "exact", 1, su2_round_trip},
      {2, "su(2) invariants", "exact", 1, su2_invariants},
      {3, "notinv pipeline", "exact", 5, notinv_pipeline},
      {4, "notin counterexample", "exact", 5, notin_counterexample},
      {5, "IM-foliation bijection instances", "exact", 10, bijection_instances},
      {6, "algebroid oracle agreement", "100% agreement", 60, oracle_agreement},
      {7, "algebra property suite", "exact", 60, property_suite},
      {8, "Lie algebra quotient oracle", "exact", 30, quotient_oracle},
      {9, "CLI determinism and witnesses", "byte-identical", 10, cli_determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_s;
    const bool ok = o.pass && in_time;
    failed += !ok;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.3fs / limit %.0fs", secs, c.limit_s);
    std::cout << (ok ? "PASS" : "FAIL") << "  " << c.id << "  " << c.name << "  [" << c.tolerance << "; " << timing
              << "]  " << (in_time ? o.detail : "over time limit; " + o.detail) << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass" << std::endl;
  return failed == 0 ? 0 : 1;
}
