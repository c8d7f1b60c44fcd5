#include "nq1/commands.hpp"

#include <functional>
#include <sstream>

namespace nq1 {

using json = nlohmann::ordered_json;

namespace {

class UsageError : public Error {
public:
  using Error::Error;
};

const char* status(bool ok) { return ok ? "pass" : "fail"; }

json point_json(const Point& p) {
  json a = json::array();
  for (const auto& c : p) a.push_back(scalar_to_string(c));
  return a;
}

json report_json(const AxiomReport& r) {
  json a = json::array();
  for (const auto& e : r.entries) {
    json j{{"axiom", e.axiom}, {"status", status(e.pass)}};
    if (!e.pass) j["witness"] = e.witness;
    a.push_back(std::move(j));
  }
  return a;
}

VectorField base_field(Signature sig, const BaseVectorField& y) {
  std::vector<Function> even(sig.base, Function(sig)), odd(sig.rank, Function(sig));
  for (int i = 0; i < sig.base; ++i) even[i] = Function::from_poly(sig, y[i]);
  return VectorField(sig, std::move(even), std::move(odd));
}

json algebroid_json(const LieAlgebroidData& a) {
  json c = json::array(), rho = json::array();
  for (int i = 0; i < a.rank(); ++i) {
    for (int j = i + 1; j < a.rank(); ++j) {
      for (int k = 0; k < a.rank(); ++k) {
        if (!a.structure(i, j, k).is_zero()) {
          c.push_back({{"index", {i + 1, j + 1, k + 1}}, {"value", a.structure(i, j, k).to_string()}});
        }
      }
    }
  }
  for (int i = 0; i < a.rank(); ++i) {
    for (int al = 0; al < a.base(); ++al) {
      if (!a.anchor(i, al).is_zero()) rho.push_back({{"index", {i + 1, al + 1}}, {"value", a.anchor(i, al).to_string()}});
    }
  }
  return json{{"base", a.base()}, {"rank", a.rank()}, {"c", c}, {"rho", rho}};
}

std::string manifold_line(Signature s) {
  return "manifold { base = " + std::to_string(s.base) + "; rank = " + std::to_string(s.rank) + " }\n";
}

json distribution_json(const Distribution& d) {
  json gens = json::array();
  for (std::size_t i = 0; i < d.gens_m1.size(); ++i) {
    gens.push_back({{"label", d.label(-1, int(i))}, {"degree", -1}, {"field", d.gens_m1[i].to_string()}});
  }
  for (std::size_t i = 0; i < d.gens_0.size(); ++i) {
    gens.push_back({{"label", d.label(0, int(i))}, {"degree", 0}, {"field", d.gens_0[i].to_string()}});
  }
  json j{{"certified", d.certified}, {"kind", d.certified ? "distribution" : "module"}};
  if (d.certified) j["certainty"] = to_string(d.certainty);
  if (!d.certified) {
    j["failure"] = d.failure;
    if (d.failing_point) j["failing_point"] = point_json(*d.failing_point);
  }
  j["generators"] = gens;
  return j;
}

json involutive_json(const InvolutivityCheck& c) {
  json j{{"status", status(c.involutive)}};
  if (c.involutive) {
    j["certainty"] = to_string(c.certainty);
  } else {
    j["pair"] = {c.first, c.second};
    j["bracket"] = c.bracket.to_string();
  }
  return j;
}

json qinv_json(const QInvarianceCheck& c) {
  json j{{"status", status(c.invariant)}};
  if (c.invariant) {
    j["certainty"] = to_string(c.certainty);
  } else {
    j["generator"] = c.generator;
    j["bracket"] = c.bracket.to_string();
  }
  return j;
}

json triple_json(const ClassicalTriple& t) {
  json b = json::array(), f = json::array(), comp = json::array(), nabla = json::array();
  for (int j = 0; j < t.B.cols(); ++j) {
    Section s(t.sig.rank);
    for (int i = 0; i < t.sig.rank; ++i) s[i] = t.B(i, j);
    b.push_back(section_field(t.sig, s).to_string());
  }
  for (const auto& y : t.F) f.push_back(base_field(t.sig, y).to_string());
  for (int c : t.complement) comp.push_back(c + 1);
  for (const auto& g : t.nabla) {
    json rows = json::array();
    for (int i = 0; i < g.rows(); ++i) {
      json row = json::array();
      for (int k = 0; k < g.cols(); ++k) row.push_back(g(i, k).to_string());
      rows.push_back(std::move(row));
    }
    nabla.push_back(std::move(rows));
  }
  return json{{"B", b}, {"complement", comp}, {"F", f}, {"nabla", nabla}};
}

json header(const std::string& command) { return json{{"schema", 1}, {"command", command}}; }

void finish(CommandResult& r, bool ok) {
  r.json["status"] = status(ok);
  r.exit_code = ok ? exit_pass : exit_fail;
}

std::optional<VectorField> optional_q(const Document& doc, const std::string& ref) {
  if (!ref.empty()) return doc.resolve_q(ref);
  if (doc.q_fields.empty() && doc.algebroids.empty()) return std::nullopt;
  return doc.resolve_q("");
}

CommandResult check_q(const Document& doc) {
  CommandResult r;
  r.json = header("check-q");
  std::ostringstream t;
  bool ok = true;
  if (doc.q_fields.empty() && doc.algebroids.empty()) throw UsageError("check-q needs a q_field or algebroid block");
  if (!doc.q_fields.empty()) {
    const VectorField& q = doc.q_fields.front().value;
    auto h = is_homological(q);
    r.json["q"] = q.to_string();
    r.json["homological"] = h.homological;
    if (!h.homological) {
      r.json["witness"] = h.witness;
      r.json["square"] = h.square.to_string();
    }
    t << "[Q,Q] = 0: " << status(h.homological) << (h.homological ? "" : "  " + h.witness) << "\n";
    ok = ok && h.homological;
  }
  if (!doc.algebroids.empty()) {
    const LieAlgebroidData& a = doc.algebroids.front().value;
    auto axioms = verify_algebroid_axioms(a);
    auto h = is_homological(build_q(a));
    r.json["algebroid"] = algebroid_json(a);
    r.json["axioms"] = report_json(axioms);
    r.json["built_q_homological"] = h.homological;
    if (!h.homological) r.json["built_q_witness"] = h.witness;
    r.json["agree"] = h.homological == axioms.pass();
    t << "algebroid axioms: " << status(axioms.pass());
    if (auto* f = axioms.first_failure()) t << "  " << f->axiom << ": " << f->witness;
    t << "\n[build_q(A), build_q(A)] = 0: " << status(h.homological) << (h.homological ? "" : "  " + h.witness)
      << "\n";
    ok = ok && axioms.pass() && h.homological;
  }
  finish(r, ok);
  r.text = t.str();
  return r;
}

CommandResult extract(const Document& doc) {
  CommandResult r;
  r.json = header("extract-algebroid");
  if (doc.q_fields.empty()) throw UsageError("extract-algebroid needs a q_field block");
  const VectorField& q = doc.q_fields.front().value;
  auto h = is_homological(q);
  r.json["q"] = q.to_string();
  r.json["homological"] = h.homological;
  if (!h.homological) {
    r.json["witness"] = h.witness;
    r.json["square"] = h.square.to_string();
    r.text = "not homological: " + h.witness + "\n";
    finish(r, false);
    return r;
  }
  const LieAlgebroidData a = extract_algebroid(q);
  auto axioms = verify_algebroid_axioms(a);
  r.json["algebroid"] = algebroid_json(a);
  r.json["axioms"] = report_json(axioms);
  r.json["round_trip"] = build_q(a) == q;
  r.text = manifold_line(a.signature()) + "\n" + render_algebroid_block(a);
  r.json["dsl"] = r.text;
  finish(r, axioms.pass() && build_q(a) == q);
  return r;
}

CommandResult build(const Document& doc) {
  CommandResult r;
  r.json = header("build-q");
  if (doc.algebroids.empty()) throw UsageError("build-q needs an algebroid block");
  const LieAlgebroidData& a = doc.algebroids.front().value;
  const VectorField q = build_q(a);
  auto h = is_homological(q);
  auto axioms = verify_algebroid_axioms(a);
  r.json["q"] = q.to_string();
  r.json["homological"] = h.homological;
  if (!h.homological) r.json["witness"] = h.witness;
  r.json["axioms"] = report_json(axioms);
  r.json["agree"] = h.homological == axioms.pass();
  r.json["round_trip"] = extract_structure(q) == a;
  r.text = manifold_line(a.signature()) + "\n" + render_q_block(q);
  r.json["dsl"] = r.text;
  finish(r, h.homological && axioms.pass());
  return r;
}

CommandResult analyze(const Document& doc, const RunOptions& opt) {
  CommandResult r;
  r.json = header("analyze-distribution");
  if (doc.distributions.empty()) throw UsageError("analyze-distribution needs a distribution block");
  const SampleOptions so = sample_options(doc, opt);
  std::ostringstream t;
  bool all = true;
  json list = json::array();
  for (const auto& b : doc.distributions) {
    const Distribution d = block_distribution(doc, b, so);
    const auto q = optional_q(doc, b.q);
    json j{{"name", b.name}};
    j.update(distribution_json(d));
    const auto inv = dist_is_involutive(d);
    j["involutive"] = involutive_json(inv);
    bool ok = d.certified && inv.involutive;
    t << (b.name.empty() ? "distribution" : b.name) << ": " << (d.certified ? "distribution" : "module only");
    if (!d.certified) t << " (" << d.failure << ")";
    t << "\n  involutive: " << status(inv.involutive);
    if (!inv.involutive) t << "  [" << inv.first << ", " << inv.second << "] = " << inv.bracket.to_string();
    t << "\n";
    if (q) {
      const auto qi = dist_is_q_invariant(d, *q);
      j["q_invariant"] = qinv_json(qi);
      ok = ok && qi.invariant;
      t << "  Q-invariant: " << status(qi.invariant);
      if (!qi.invariant) t << "  [Q, " << qi.generator << "] = " << qi.bracket.to_string();
      t << "\n";
    }
    if (d.certified && inv.involutive) {
      try {
        j["triple"] = triple_json(dist_to_classical(d));
      } catch (const ClassicalError& e) {
        j["triple_error"] = e.what();
      }
    }
    j["status"] = status(ok);
    all = all && ok;
    list.push_back(std::move(j));
  }
  r.json["samples"] = so.samples;
  r.json["seed"] = so.seed;
  r.json["distributions"] = list;
  finish(r, all);
  r.text = t.str();
  return r;
}

CommandResult check_imf(const Document& doc, const RunOptions& opt) {
  CommandResult r;
  r.json = header("check-imfoliation");
  if (doc.imfoliations.empty()) throw UsageError("check-imfoliation needs an imfoliation block");
  const SampleOptions so = sample_options(doc, opt);
  std::ostringstream t;
  bool all = true;
  json list = json::array();
  for (const auto& b : doc.imfoliations) {
    const IMFoliation im = to_imfoliation(doc, b);
    json j{{"name", b.name}, {"triple", triple_json(im.triple)}};
    bool ok = true;
    t << (b.name.empty() ? "imfoliation" : b.name) << ":\n";
    try {
      const AxiomReport axioms = imf_check_axioms(im, so);
      j["axioms"] = report_json(axioms);
      ok = axioms.pass();
      t << "  axioms: " << status(ok);
      if (auto* f = axioms.first_failure()) t << "  " << f->axiom << ": " << f->witness;
      t << "\n";
    } catch (const ClassicalError& e) {
      j["axioms_error"] = e.what();
      t << "  " << e.what() << "\n";
      ok = false;
    }
    if (ok) {
      const IMDistribution id = distribution_from_imf(im, so);
      const VectorField q = build_q(im.algebroid);
      j["distribution"] = distribution_json(id.distribution);
      j["involutive"] = involutive_json(id.involutive);
      j["q_invariant"] = qinv_json(id.q_invariant);
      ok = id.distribution.certified && id.involutive.involutive && id.q_invariant.invariant;
      bool round = false;
      if (ok) {
        const IMFoliation back = imf_from_distribution(id.distribution, q);
        const IMDistribution again = distribution_from_imf(back, so);
        round = module_equal(id.distribution, again.distribution);
      }
      j["round_trip"] = round;
      ok = ok && round;
      t << "  distribution: involutive " << status(id.involutive.involutive) << ", Q-invariant "
        << status(id.q_invariant.invariant) << ", round trip " << status(round) << "\n";
    }
    j["status"] = status(ok);
    all = all && ok;
    list.push_back(std::move(j));
  }
  r.json["imfoliations"] = list;
  finish(r, all);
  r.text = t.str();
  return r;
}

const ActionBlock& first_action(const Document& doc) {
  if (doc.actions.empty()) throw UsageError("no action block");
  return doc.actions.front();
}

CommandResult check_action(const Document& doc, const RunOptions& opt) {
  CommandResult r;
  r.json = header("check-action");
  if (doc.actions.empty()) throw UsageError("check-action needs an action block");
  const SampleOptions so = sample_options(doc, opt);
  std::ostringstream t;
  bool all = true;
  json list = json::array();
  for (const auto& b : doc.actions) {
    const StrictLie2Algebra* l = doc.find_lie2(b.algebra);
    if (!l) throw UsageError("action '" + b.name + "' has no lie2algebra");
    const VectorField q = doc.resolve_q(b.q);
    json j{{"name", b.name}};
    const AxiomReport lie = check_lie2(*l);
    const AxiomReport cons = action_check_constraints(*l, b.action, q);
    j["lie2algebra"] = report_json(lie);
    j["constraints"] = report_json(cons);
    t << (b.name.empty() ? "action" : b.name) << ":\n  lie2algebra: " << status(lie.pass());
    if (auto* f = lie.first_failure()) t << "  " << f->axiom << ": " << f->witness;
    t << "\n  constraints: " << status(cons.pass());
    if (auto* f = cons.first_failure()) t << "  " << f->axiom << ": " << f->witness;
    t << "\n";
    const Distribution d = action_distribution(*l, b.action, q, so);
    j["distribution"] = distribution_json(d);
    const ClosureCheck c = action_closure_check(d, q);
    json cj{{"status", status(c.closed)}};
    if (!c.closed) {
      cj["pair"] = {c.first, c.second};
      cj["witness"] = c.witness.to_string();
      t << "  closure [D0, D-1] in D-1: fail  [" << c.first << ", " << c.second << "] = " << c.witness.to_string()
        << "\n";
    } else {
      cj["involutive"] = involutive_json(c.involutive);
      cj["q_invariant"] = qinv_json(c.q_invariant);
      t << "  closure [D0, D-1] in D-1: pass; involutive " << status(c.involutive.involutive) << ", Q-invariant "
        << status(c.q_invariant.invariant) << "\n";
    }
    j["closure"] = cj;
    bool ok = lie.pass() && cons.pass() && c.closed && c.involutive.involutive && c.q_invariant.invariant;
    if (b.action.eta_is_zero()) {
      const StrictActionReport s = strict_action_check(*l, b.action, q, so);
      json sj{{"morphism", report_json(s.morphism)}, {"almost_free", s.almost_free}};
      if (s.rank_drop) sj["rank_drop"] = point_json(*s.rank_drop);
      j["strict"] = sj;
      t << "  strict: morphism " << status(s.morphism.pass()) << ", almost free " << (s.almost_free ? "yes" : "no")
        << "\n";
    }
    j["status"] = status(ok);
    all = all && ok;
    list.push_back(std::move(j));
  }
  r.json["samples"] = so.samples;
  r.json["seed"] = so.seed;
  r.json["actions"] = list;
  finish(r, all);
  r.text = t.str();
  return r;
}

json quotient_json(const QuotientResult& q, const ReductionSetting& s) {
  json j{{"mode", to_string(s.mode)}, {"singular", q.singular}};
  json fiber = json::array();
  for (int i : s.fiber_coords) fiber.push_back(i + 1);
  j["fiber_coords"] = fiber;
  if (q.singular) {
    json basis = json::array(), qf = json::array(), degrees = json::object();
    for (const auto& f : q.invariants.basis) basis.push_back(f.to_string());
    for (const auto& [f, g] : q.q_on_invariants) qf.push_back({{"f", f.to_string()}, {"Qf", g.to_string()}});
    for (const auto& [k, n] : q.generator_degrees) degrees[std::to_string(k)] = n;
    j["invariants"] = basis;
    j["max_xi_degree"] = q.invariants.max_xi_degree;
    j["max_base_degree"] = q.invariants.max_base_degree;
    j["q_on_invariants"] = qf;
    j["generator_degrees"] = degrees;
    return j;
  }
  json tr = json::array(), zeta = json::array();
  for (int i : q.transverse_coords) tr.push_back(i + 1);
  for (const auto& z : q.zeta) zeta.push_back(z.to_string());
  j["transverse_coords"] = tr;
  j["zeta"] = zeta;
  j["q"] = q.q.to_string();
  j["homological"] = is_homological(q.q).homological;
  j["algebroid"] = algebroid_json(q.algebroid);
  return j;
}

std::string quotient_text(const QuotientResult& q) {
  if (!q.singular) return manifold_line(q.algebroid.signature()) + "\n" + render_algebroid_block(q.algebroid);
  std::ostringstream t;
  t << "# singular quotient: invariant functions up to xi-degree " << q.invariants.max_xi_degree << "\n";
  for (const auto& f : q.invariants.basis) t << "#   " << f.to_string() << "\n";
  for (const auto& [k, n] : q.generator_degrees) t << "# generated in degree " << k << " (" << n << " generator" << (n == 1 ? "" : "s") << ")\n";
  return t.str();
}

CommandResult reduce_cmd(const Document& doc, const RunOptions& opt) {
  CommandResult r;
  r.json = header("reduce");
  const ReductionSetting base = reduction_setting(doc, opt);
  try {
    if (!doc.actions.empty()) {
      const ActionBlock& b = first_action(doc);
      const StrictLie2Algebra* l = doc.find_lie2(b.algebra);
      if (!l) throw UsageError("action '" + b.name + "' has no lie2algebra");
      const VectorField q = doc.resolve_q(b.q);
      const Distribution d = action_distribution(*l, b.action, q, base.samples);
      const ReductionSetting s = detect_setting(d, base);
      const ActionQuotient aq = action_quotient(*l, b.action, q, s);
      r.json["source"] = "action";
      r.json["name"] = b.name;
      json bs = json::array(), fs = json::array();
      for (const auto& sec : aq.b) bs.push_back(section_field(q.signature(), sec).to_string());
      for (const auto& y : aq.f) fs.push_back(base_field(q.signature(), y).to_string());
      r.json["ideal_system"] = {{"B", bs}, {"F", fs}};
      r.json["quotient"] = quotient_json(aq.quotient, s);
      r.text = quotient_text(aq.quotient);
      finish(r, aq.quotient.singular || is_homological(aq.quotient.q).homological);
    } else {
      if (doc.distributions.empty()) throw UsageError("reduce needs an action or a distribution block");
      const DistributionBlock& b = doc.distributions.front();
      const VectorField q = doc.resolve_q(b.q);
      const Distribution d = block_distribution(doc, b, base.samples);
      const ReductionSetting s = detect_setting(d, base);
      const QuotientResult qr = reduce(q, d, s);
      r.json["source"] = "distribution";
      r.json["name"] = b.name;
      r.json["quotient"] = quotient_json(qr, s);
      r.text = quotient_text(qr);
      finish(r, qr.singular || is_homological(qr.q).homological);
    }
  } catch (const ReductionError& e) {
    r.json["error"] = e.what();
    r.text = std::string("reduction failed: ") + e.what() + "\n";
    finish(r, false);
  } catch (const ClassicalError& e) {
    r.json["error"] = e.what();
    r.text = std::string("reduction failed: ") + e.what() + "\n";
    finish(r, false);
  }
  if (r.exit_code == exit_pass || r.json.contains("quotient")) r.json["dsl"] = r.text;
  return r;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"check-q",         "extract-algebroid", "build-q", "analyze-distribution",
                                              "check-imfoliation", "check-action",      "reduce"};
  return names;
}

SampleOptions sample_options(const Document& doc, const RunOptions& opt) {
  SampleOptions s;
  if (doc.settings.samples) s.samples = *doc.settings.samples;
  if (doc.settings.seed) s.seed = *doc.settings.seed;
  if (opt.samples) s.samples = *opt.samples;
  if (opt.seed) s.seed = *opt.seed;
  if (s.samples < 0) throw UsageError("--samples must be non-negative");
  return s;
}

ReductionSetting reduction_setting(const Document& doc, const RunOptions& opt) {
  ReductionSetting s;
  s.samples = sample_options(doc, opt);
  if (doc.settings.max_xi_degree) s.max_xi_degree = *doc.settings.max_xi_degree;
  if (doc.settings.max_base_degree) s.max_base_degree = *doc.settings.max_base_degree;
  if (doc.settings.fiber_coords) s.fiber_coords = *doc.settings.fiber_coords;
  if (opt.max_xi_degree) s.max_xi_degree = *opt.max_xi_degree;
  if (opt.max_base_degree) s.max_base_degree = *opt.max_base_degree;
  if (s.max_base_degree < 0) throw UsageError("--max-base-degree must be non-negative");
  return s;
}

Distribution block_distribution(const Document& doc, const DistributionBlock& b, const SampleOptions& opt) {
  std::vector<VectorField> m1, g0;
  for (const auto& g : b.gens) {
    if (g.is_zero()) continue;
    (*g.degree() == -1 ? m1 : g0).push_back(g);
  }
  return dist_validate(doc.signature(), std::move(m1), std::move(g0), opt);
}

CommandResult run_command(const std::string& command, const Document& doc, const RunOptions& opt) {
  using Runner = std::function<CommandResult()>;
  const std::map<std::string, Runner> table{
      {"check-q", [&] { return check_q(doc); }},
      {"extract-algebroid", [&] { return extract(doc); }},
      {"build-q", [&] { return build(doc); }},
      {"analyze-distribution", [&] { return analyze(doc, opt); }},
      {"check-imfoliation", [&] { return check_imf(doc, opt); }},
      {"check-action", [&] { return check_action(doc, opt); }},
      {"reduce", [&] { return reduce_cmd(doc, opt); }},
  };
  auto usage = [&](const std::string& msg) {
    CommandResult r;
    r.json = header(command);
    r.json["status"] = "error";
    r.json["error"] = msg;
    r.exit_code = exit_usage;
    r.text = "error: " + msg + "\n";
    return r;
  };
  auto it = table.find(command);
  if (it == table.end()) return usage("unknown command '" + command + "'");
  try {
    return it->second();
  } catch (const UsageError& e) {
    return usage(e.what());
  } catch (const NotHomological& e) {
    CommandResult r;
    r.json = header(command);
    r.json["error"] = e.what();
    r.json["witness"] = e.witness;
    r.text = std::string(e.what()) + "\n";
    finish(r, false);
    return r;
  } catch (const InternalError&) {
    throw;
  } catch (const Error& e) {
    return usage(e.what());
  }
}

CommandResult run_command_text(const std::string& command, const std::string& text, const RunOptions& opt) {
  Document doc;
  try {
    doc = parse_document(text);
  } catch (const Error& e) {
    CommandResult r;
    r.json = header(command);
    r.json["status"] = "error";
    r.json["error"] = e.what();
    r.exit_code = exit_usage;
    r.text = std::string("error: ") + e.what() + "\n";
    return r;
  }
  return run_command(command, doc, opt);
}

}  // namespace nq1
