#include "nq1/dsl.hpp"

#include <cctype>
#include <set>
#include <sstream>

namespace nq1 {

namespace {

enum class Tok { end, number, ident, dx, dxi, punct };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  int index = 0;  // 0-based generator for dx/dxi
  int line = 1;
  int col = 1;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto digits_at = [&](std::size_t p) {
    std::size_t q = p;
    while (q < s.size() && std::isdigit(static_cast<unsigned char>(s[q]))) ++q;
    return q - p;
  };
  while (i < s.size()) {
    const char c = s[i];
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (s.substr(i, 4) == "d/dx") {
      const bool odd = s.substr(i, 5) == "d/dxi";
      const std::size_t start = i + (odd ? 5 : 4);
      const std::size_t nd = digits_at(start);
      if (nd > 0) {
        t.kind = odd ? Tok::dxi : Tok::dx;
        t.text = std::string(s.substr(i, start + nd - i));
        const int idx = std::stoi(std::string(s.substr(start, nd)));
        if (idx < 1) throw ParseError(t.line, t.col, "indices start at 1");
        t.index = idx - 1;
        advance(start + nd - i);
        out.push_back(std::move(t));
        continue;
      }
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t nd = digits_at(i);
      t.kind = Tok::number;
      t.text = std::string(s.substr(i, nd));
      advance(nd);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t q = i;
      while (q < s.size() && (std::isalnum(static_cast<unsigned char>(s[q])) || s[q] == '_')) ++q;
      t.kind = Tok::ident;
      t.text = std::string(s.substr(i, q - i));
      advance(q - i);
    } else if (std::string_view("{}[](),;=+-*/^").find(c) != std::string_view::npos) {
      t.kind = Tok::punct;
      t.text = std::string(1, c);
      advance(1);
    } else {
      throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }
    out.push_back(std::move(t));
  }
  Token e;
  e.line = line;
  e.col = col;
  out.push_back(e);
  return out;
}

// x<digits> or xi<digits>; returns 0-based index or -1.
int generator_index(const std::string& id, const char* prefix) {
  const std::size_t p = std::char_traits<char>::length(prefix);
  if (id.size() <= p || id.compare(0, p, prefix) != 0) return -1;
  for (std::size_t k = p; k < id.size(); ++k) {
    if (!std::isdigit(static_cast<unsigned char>(id[k]))) return -1;
  }
  if (id[p] == '0') return -1;
  return std::stoi(id.substr(p)) - 1;
}

std::string describe(const Token& t) {
  if (t.kind == Tok::end) return "end of input";
  return "'" + t.text + "'";
}

class Parser {
public:
  Parser(std::vector<Token> toks, Document* doc) : toks_(std::move(toks)), doc_(doc) {}

  void set_signature(Signature s) { sig_ = s; }
  void set_env(std::map<std::string, VectorField> env) { env_ = std::move(env); }

  const Token& peek(int k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Tok::end; }
  bool is_punct(const char* p, int k = 0) const { return peek(k).kind == Tok::punct && peek(k).text == p; }
  Token take() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  [[noreturn]] void fail(const Token& t, const std::string& msg) const { throw ParseError(t.line, t.col, msg); }
  Token expect_punct(const char* p) {
    if (!is_punct(p)) fail(peek(), std::string("expected '") + p + "', found " + describe(peek()));
    return take();
  }
  Token expect_ident() {
    if (peek().kind != Tok::ident) fail(peek(), "expected a name, found " + describe(peek()));
    return take();
  }
  int expect_int() {
    if (peek().kind != Tok::number) fail(peek(), "expected an integer, found " + describe(peek()));
    Token t = take();
    if (t.text.size() > 9) fail(t, "integer too large");
    return std::stoi(t.text);
  }
  // 1-based index in [1, bound] -> 0-based.
  int expect_index(int bound, const char* what) {
    const Token& t = peek();
    int v = expect_int();
    if (v < 1 || v > bound) fail(t, std::string(what) + " index " + std::to_string(v) + " out of range 1.." + std::to_string(bound));
    return v - 1;
  }

  Signature signature(const Token& at) const {
    if (!sig_) fail(at, "no manifold signature declared before this expression");
    return *sig_;
  }

  // --- expressions -------------------------------------------------------

  Value expression() {
    Value v = term();
    while (is_punct("+") || is_punct("-")) {
      Token op = take();
      Value r = term();
      v = combine(op, std::move(v), std::move(r), op.text == "+" ? 1 : -1);
    }
    return v;
  }

  Value term() {
    Value v = unary();
    while (is_punct("*") || is_punct("/")) {
      Token op = take();
      Value r = unary();
      if (op.text == "*") {
        v = multiply(op, std::move(v), std::move(r));
      } else {
        const Function* f = std::get_if<Function>(&r);
        if (!f || !is_constant(*f) || f->is_zero()) fail(op, "division is only by nonzero rational constants");
        const Scalar inv = 1 / f->coefficient(OddMonomial()).constant_term();
        v = scale(std::move(v), inv);
      }
    }
    return v;
  }

  Value unary() {
    if (is_punct("-")) {
      take();
      return scale(unary(), Scalar(-1));
    }
    if (is_punct("+")) {
      take();
      return unary();
    }
    return power();
  }

  Value power() {
    Value v = atom();
    while (is_punct("^")) {
      Token op = take();
      if (peek().kind == Tok::number) {
        const int e = expect_int();
        const Function* f = std::get_if<Function>(&v);
        if (!f) fail(op, "powers of vector fields are not defined");
        Function acc = Function::constant(signature(op), 1);
        for (int k = 0; k < e; ++k) acc = acc * *f;
        v = acc;
      } else {
        Value r = atom();
        v = multiply(op, std::move(v), std::move(r));
      }
    }
    return v;
  }

  Value atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::number: {
        Token n = take();
        return Function::constant(signature(n), Scalar(n.text));
      }
      case Tok::dx: {
        Token d = take();
        const Signature s = signature(d);
        if (d.index >= s.base) fail(d, d.text + " exceeds the base dimension " + std::to_string(s.base));
        return VectorField::d_even(s, d.index);
      }
      case Tok::dxi: {
        Token d = take();
        const Signature s = signature(d);
        if (d.index >= s.rank) fail(d, d.text + " exceeds the rank " + std::to_string(s.rank));
        return VectorField::d_odd(s, d.index);
      }
      case Tok::ident: {
        Token id = take();
        const Signature s = signature(id);
        if (int a = generator_index(id.text, "xi"); a >= 0) {
          if (a >= s.rank) fail(id, id.text + " exceeds the rank " + std::to_string(s.rank));
          return Function::odd_generator(s, a);
        }
        if (int i = generator_index(id.text, "x"); i >= 0) {
          if (i >= s.base) fail(id, id.text + " exceeds the base dimension " + std::to_string(s.base));
          return Function::even_generator(s, i);
        }
        auto it = env_.find(id.text);
        if (it == env_.end()) fail(id, "unresolved reference '" + id.text + "'");
        return it->second;
      }
      case Tok::punct:
        if (t.text == "(") {
          take();
          Value v = expression();
          expect_punct(")");
          return v;
        }
        if (t.text == "[") {
          Token open = take();
          Value a = expression();
          expect_punct(",");
          Value b = expression();
          expect_punct("]");
          const VectorField* x = std::get_if<VectorField>(&a);
          if (!x) fail(open, "the first entry of [ , ] must be a vector field");
          if (const VectorField* y = std::get_if<VectorField>(&b)) return bracket(*x, *y);
          return apply(*x, std::get<Function>(b));
        }
        break;
      default:
        break;
    }
    fail(t, "expected an expression, found " + describe(t));
  }

  static bool is_constant(const Function& f) {
    if (f.is_zero()) return true;
    return f.terms().size() == 1 && f.terms().begin()->first.is_unit() &&
           f.terms().begin()->second.is_constant();
  }

  static Value scale(Value v, const Scalar& c) {
    if (auto* f = std::get_if<Function>(&v)) return c * *f;
    return c * std::get<VectorField>(v);
  }

  Value combine(const Token& op, Value a, Value b, int sign) {
    if (a.index() != b.index()) {
      // A zero function stands for the zero field.
      if (auto* f = std::get_if<Function>(&a); f && f->is_zero()) a = VectorField(signature(op));
      if (auto* f = std::get_if<Function>(&b); f && f->is_zero()) b = VectorField(signature(op));
    }
    if (a.index() != b.index()) fail(op, "cannot add a function and a vector field");
    if (auto* f = std::get_if<Function>(&a)) {
      return sign > 0 ? *f + std::get<Function>(b) : *f - std::get<Function>(b);
    }
    auto& x = std::get<VectorField>(a);
    return sign > 0 ? x + std::get<VectorField>(b) : x - std::get<VectorField>(b);
  }

  Value multiply(const Token& op, Value a, Value b) {
    const Function* f = std::get_if<Function>(&a);
    if (!f) fail(op, "a vector field can only be multiplied from the left by a function");
    if (const Function* g = std::get_if<Function>(&b)) return *f * *g;
    return *f * std::get<VectorField>(b);
  }

  Function function_expr(const char* what) {
    const Token& at = peek();
    Value v = expression();
    if (auto* x = std::get_if<VectorField>(&v)) {
      if (!x->is_zero()) fail(at, std::string(what) + " must be a function, not a vector field");
      return Function(signature(at));
    }
    return std::get<Function>(v);
  }

  Poly poly_expr(const char* what) {
    const Token& at = peek();
    const Signature s = signature(at);
    Function f = function_expr(what);
    for (const auto& [m, p] : f.terms()) {
      if (!m.is_unit()) fail(at, std::string(what) + " must not involve xi");
    }
    Poly p(s.base);
    p += f.coefficient(OddMonomial());
    return p;
  }

  Scalar scalar_expr(const char* what) {
    const Token& at = peek();
    Function f = function_expr(what);
    if (!is_constant(f)) fail(at, std::string(what) + " must be a rational constant");
    return f.is_zero() ? Scalar(0) : f.coefficient(OddMonomial()).constant_term();
  }

  VectorField field_expr(const char* what) {
    const Token& at = peek();
    Value v = expression();
    if (auto* f = std::get_if<Function>(&v)) {
      if (!f->is_zero()) fail(at, std::string(what) + " must be a vector field");
      return VectorField(signature(at));
    }
    return std::get<VectorField>(v);
  }

  template <class Fn>
  void list(Fn&& item) {
    expect_punct("[");
    if (is_punct("]")) {
      take();
      return;
    }
    for (;;) {
      item();
      if (is_punct(",")) {
        take();
        continue;
      }
      expect_punct("]");
      return;
    }
  }

  // --- blocks -------------------------------------------------------------

  void document() {
    while (!at_end()) block();
  }

  std::set<std::string> used_names_;

  void block() {
    Token kind = expect_ident();
    std::string name;
    if (peek().kind == Tok::ident) {
      Token n = take();
      name = n.text;
      if (generator_index(name, "x") >= 0 || generator_index(name, "xi") >= 0) fail(n, "'" + name + "' is reserved");
      if (!used_names_.insert(name).second) fail(n, "duplicate block name '" + name + "'");
    }
    expect_punct("{");
    const std::string& k = kind.text;
    if (k == "manifold") {
      manifold(kind);
    } else if (k == "algebroid") {
      algebroid(name);
    } else if (k == "q_field" || k == "field") {
      if (k == "field" && name.empty()) fail(kind, "field blocks need a name");
      Token at = peek();
      VectorField v = field_expr("field");
      if (k == "q_field") {
        try {
          v.require_degree(1, "q_field");
        } catch (const DegreeError& e) {
          fail(at, e.what());
        }
        doc_->q_fields.push_back({name, v});
        env_[name.empty() ? "Q" : name] = v;
      } else {
        doc_->fields.push_back({name, v});
        env_[name] = v;
      }
    } else if (k == "distribution") {
      distribution(name);
    } else if (k == "imfoliation") {
      imfoliation(name);
    } else if (k == "lie2algebra") {
      lie2algebra(name);
    } else if (k == "action") {
      action(name);
    } else if (k == "settings") {
      settings();
    } else {
      fail(kind, "unknown block kind '" + k + "'");
    }
    while (is_punct(";")) take();
    expect_punct("}");
  }

  // Runs `stmt(key)` for each statement until the closing brace.
  template <class Fn>
  void statements(Fn&& stmt) {
    for (;;) {
      while (is_punct(";")) take();
      if (is_punct("}")) return;
      Token key = expect_ident();
      stmt(key);
    }
  }

  void manifold(const Token& kw) {
    if (doc_->manifold) fail(kw, "manifold declared twice");
    std::optional<int> base, rank;
    statements([&](const Token& key) {
      if (key.text == "base") {
        expect_punct("=");
        base = expect_int();
      } else if (key.text == "rank") {
        expect_punct("=");
        const Token& at = peek();
        rank = expect_int();
        if (*rank > kMaxRank) fail(at, "rank above " + std::to_string(kMaxRank));
      } else {
        fail(key, "unknown manifold key '" + key.text + "'");
      }
    });
    if (!base || !rank) fail(kw, "manifold needs base and rank");
    declare(kw, Signature{*base, *rank});
  }

  void declare(const Token& at, Signature s) {
    if (sig_ && !(*sig_ == s)) {
      fail(at, "signature (n=" + std::to_string(s.base) + ", r=" + std::to_string(s.rank) +
                   ") conflicts with the declared manifold");
    }
    sig_ = s;
    doc_->manifold = s;
  }

  void algebroid(const std::string& name) {
    std::optional<int> base, rank;
    std::optional<LieAlgebroidData> a;
    std::map<std::tuple<int, int, int>, Poly> given;
    auto ensure = [&](const Token& at) {
      if (a) return;
      if (base || rank) {
        if (!base || !rank) fail(at, "algebroid needs both dim_base and rank");
        declare(at, Signature{*base, *rank});
      }
      const Signature s = signature(at);
      a = LieAlgebroidData(s.base, s.rank);
    };
    Token first = peek();
    statements([&](const Token& key) {
      if (key.text == "dim_base" || key.text == "rank") {
        if (a) fail(key, "dimensions must precede structure functions");
        expect_punct("=");
        (key.text == "rank" ? rank : base) = expect_int();
      } else if (key.text == "c") {
        ensure(key);
        expect_punct("[");
        const int r = a->rank();
        int i = expect_index(r, "frame");
        expect_punct(",");
        int j = expect_index(r, "frame");
        expect_punct(",");
        int k = expect_index(r, "frame");
        expect_punct("]");
        expect_punct("=");
        Poly v = poly_expr("structure function");
        if (i == j && !v.is_zero()) fail(key, "c[i,i,k] must vanish");
        auto partner = given.find({j, i, k});
        if (partner != given.end() && !(partner->second == -v)) fail(key, "c is antisymmetric in its first two indices");
        given[{i, j, k}] = v;
        if (i != j) a->set_structure(i, j, k, v);
      } else if (key.text == "rho") {
        ensure(key);
        expect_punct("[");
        int i = expect_index(a->rank(), "frame");
        expect_punct(",");
        int al = expect_index(a->base(), "coordinate");
        expect_punct("]");
        expect_punct("=");
        a->set_anchor(i, al, poly_expr("anchor component"));
      } else {
        fail(key, "unknown algebroid key '" + key.text + "'");
      }
    });
    ensure(first);
    doc_->algebroids.push_back({name, *a});
    env_[name.empty() ? "Q" : name] = build_q(*a);
  }

  void distribution(const std::string& name) {
    DistributionBlock b;
    b.name = name;
    statements([&](const Token& key) {
      expect_punct("=");
      if (key.text == "q") {
        Token r = expect_ident();
        check_q_ref(r);
        b.q = r.text;
      } else if (key.text == "gen") {
        Token at = peek();
        VectorField v = field_expr("generator");
        if (!v.is_zero() && (!v.degree() || (*v.degree() != 0 && *v.degree() != -1))) {
          fail(at, "generators must be homogeneous of degree -1 or 0");
        }
        b.gens.push_back(std::move(v));
      } else {
        fail(key, "unknown distribution key '" + key.text + "'");
      }
    });
    doc_->distributions.push_back(std::move(b));
  }

  void check_q_ref(const Token& r) {
    for (const auto& q : doc_->q_fields) {
      if (q.name == r.text || (q.name.empty() && r.text == "Q")) return;
    }
    for (const auto& a : doc_->algebroids) {
      if (a.name == r.text || (a.name.empty() && r.text == "Q")) return;
    }
    fail(r, "unresolved reference '" + r.text + "' (expected a q_field or algebroid)");
  }

  void imfoliation(const std::string& name) {
    IMFoliationBlock b;
    b.name = name;
    statements([&](const Token& key) {
      if (key.text == "algebroid") {
        expect_punct("=");
        Token r = expect_ident();
        check_q_ref(r);
        b.algebroid = r.text;
      } else if (key.text == "B" || key.text == "F") {
        expect_punct("=");
        auto& dst = key.text == "B" ? b.b : b.f;
        list([&] {
          Token at = peek();
          VectorField v = field_expr("list entry");
          const int want = key.text == "B" ? -1 : 0;
          if (!v.is_zero() && v.degree() != want) {
            fail(at, key.text == "B" ? "entries of B must have degree -1" : "entries of F must have degree 0");
          }
          if (want == 0) {
            for (const auto& o : v.odd_coefficients()) {
              if (!o.is_zero()) fail(at, "entries of F must be base vector fields");
            }
          }
          dst.push_back(std::move(v));
        });
      } else if (key.text == "complement") {
        expect_punct("=");
        const int r = signature(key).rank;
        list([&] { b.complement.push_back(expect_index(r, "frame")); });
      } else if (key.text == "nabla") {
        expect_punct("[");
        int f = expect_int() - 1;
        expect_punct("]");
        expect_punct("[");
        int i = expect_int() - 1;
        expect_punct(",");
        int j = expect_int() - 1;
        expect_punct("]");
        if (f < 0 || i < 0 || j < 0) fail(key, "indices start at 1");
        expect_punct("=");
        b.nabla[{f, i, j}] = poly_expr("connection entry");
      } else if (key.text == "flat_frame") {
        expect_punct("=");
        std::vector<std::vector<Poly>> rows;
        list([&] {
          std::vector<Poly> row;
          list([&] { row.push_back(poly_expr("frame entry")); });
          rows.push_back(std::move(row));
        });
        b.flat_frame = std::move(rows);
      } else {
        fail(key, "unknown imfoliation key '" + key.text + "'");
      }
    });
    doc_->imfoliations.push_back(std::move(b));
  }

  // e<a> or w<j> -> 0-based index.
  int basis_ref(char prefix, int bound) {
    Token t = expect_ident();
    int v = -1;
    if (t.text.size() > 1 && t.text[0] == prefix) v = generator_index(t.text, std::string(1, prefix).c_str());
    if (v < 0) fail(t, std::string("expected a basis element ") + prefix + "<k>, found '" + t.text + "'");
    if (v >= bound) fail(t, "'" + t.text + "' is out of range");
    return v;
  }

  void lie2algebra(const std::string& name) {
    std::optional<int> d1, d0;
    std::optional<StrictLie2Algebra> l;
    Token first = peek();
    auto ensure = [&](const Token& at) {
      if (l) return;
      if (!d1 || !d0) fail(at, "declare dim_m1 and dim_0 first");
      l = StrictLie2Algebra(*d1, *d0);
    };
    statements([&](const Token& key) {
      if (key.text == "dim_m1" || key.text == "dim_0") {
        if (l) fail(key, "dimensions must come first");
        expect_punct("=");
        (key.text == "dim_m1" ? d1 : d0) = expect_int();
      } else if (key.text == "delta") {
        ensure(key);
        expect_punct("[");
        int j = basis_ref('w', l->dim_m1());
        expect_punct(",");
        int i = basis_ref('e', l->dim_0());
        expect_punct("]");
        expect_punct("=");
        l->set_delta(i, j, scalar_expr("delta entry"));
      } else if (key.text == "bracket") {
        ensure(key);
        expect_punct("[");
        int a = basis_ref('e', l->dim_0());
        expect_punct(",");
        int b = basis_ref('e', l->dim_0());
        expect_punct(",");
        int c = basis_ref('e', l->dim_0());
        expect_punct("]");
        expect_punct("=");
        Scalar v = scalar_expr("bracket entry");
        if (a == b && v != 0) fail(key, "[e, e] must vanish");
        l->set_bracket(a, b, c, v);
      } else if (key.text == "act") {
        ensure(key);
        expect_punct("[");
        int a = basis_ref('e', l->dim_0());
        expect_punct(",");
        int j = basis_ref('w', l->dim_m1());
        expect_punct(",");
        int k = basis_ref('w', l->dim_m1());
        expect_punct("]");
        expect_punct("=");
        l->set_action(a, j, k, scalar_expr("action entry"));
      } else {
        fail(key, "unknown lie2algebra key '" + key.text + "'");
      }
    });
    ensure(first);
    doc_->lie2algebras.push_back({name, *l});
  }

  void action(const std::string& name) {
    ActionBlock b;
    b.name = name;
    std::optional<Lie2Action> phi;
    Token first = peek();
    auto ensure = [&](const Token& at) {
      if (phi) return;
      const StrictLie2Algebra* l = doc_->find_lie2(b.algebra);
      if (!l) fail(at, b.algebra.empty() ? "no lie2algebra declared" : "unresolved reference '" + b.algebra + "'");
      phi = Lie2Action(signature(at), l->dim_m1(), l->dim_0());
    };
    statements([&](const Token& key) {
      if (key.text == "algebra" || key.text == "q") {
        if (phi) fail(key, "references must precede mu and eta");
        expect_punct("=");
        Token r = expect_ident();
        if (key.text == "q") {
          check_q_ref(r);
          b.q = r.text;
        } else {
          if (!doc_->find_lie2(r.text)) fail(r, "unresolved reference '" + r.text + "'");
          b.algebra = r.text;
        }
      } else if (key.text == "mu") {
        ensure(key);
        expect_punct("[");
        Token ref = peek();
        if (ref.kind == Tok::ident && !ref.text.empty() && ref.text[0] == 'w') {
          int j = basis_ref('w', phi->dim_m1());
          expect_punct("]");
          expect_punct("=");
          Token at = peek();
          phi->mu_m1[j] = field_expr("mu");
          try {
            phi->mu_m1[j].require_degree(-1, "mu on L_-1");
          } catch (const DegreeError& e) {
            fail(at, e.what());
          }
        } else {
          int a = basis_ref('e', phi->dim_0());
          expect_punct("]");
          expect_punct("=");
          Token at = peek();
          phi->mu0[a] = field_expr("mu");
          try {
            phi->mu0[a].require_degree(0, "mu on L_0");
          } catch (const DegreeError& e) {
            fail(at, e.what());
          }
        }
      } else if (key.text == "eta") {
        ensure(key);
        expect_punct("[");
        int a = basis_ref('e', phi->dim_0());
        expect_punct("^");
        int c = basis_ref('e', phi->dim_0());
        expect_punct("]");
        expect_punct("=");
        Token at = peek();
        VectorField v = field_expr("eta");
        if (a == c) {
          if (!v.is_zero()) fail(at, "eta(e ^ e) must vanish");
          return;
        }
        try {
          phi->set_eta(a, c, v);
        } catch (const DegreeError& e) {
          fail(at, e.what());
        }
      } else {
        fail(key, "unknown action key '" + key.text + "'");
      }
    });
    ensure(first);
    b.action = std::move(*phi);
    doc_->actions.push_back(std::move(b));
  }

  void settings() {
    Settings& s = doc_->settings;
    statements([&](const Token& key) {
      expect_punct("=");
      if (key.text == "samples") {
        s.samples = expect_int();
      } else if (key.text == "seed") {
        Token t = peek();
        if (t.kind != Tok::number) fail(t, "expected an integer");
        take();
        try {
          s.seed = std::stoull(t.text);
        } catch (const std::exception&) {
          fail(t, "seed out of range");
        }
      } else if (key.text == "max_xi_degree") {
        s.max_xi_degree = expect_int();
      } else if (key.text == "max_base_degree") {
        s.max_base_degree = expect_int();
      } else if (key.text == "fiber_coords") {
        const int n = signature(key).base;
        std::vector<int> v;
        list([&] { v.push_back(expect_index(n, "coordinate")); });
        s.fiber_coords = std::move(v);
      } else {
        fail(key, "unknown settings key '" + key.text + "'");
      }
    });
  }

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Document* doc_;
  std::optional<Signature> sig_;
  std::map<std::string, VectorField> env_;
};

std::string indices(std::initializer_list<int> v) {
  std::string s;
  for (int i : v) s += (s.empty() ? "" : ",") + std::to_string(i + 1);
  return s;
}

}  // namespace

bool Document::empty() const {
  return !manifold && algebroids.empty() && q_fields.empty() && fields.empty() && distributions.empty() &&
         imfoliations.empty() && lie2algebras.empty() && actions.empty();
}

Signature Document::signature() const {
  if (!manifold) throw Error("no manifold declared");
  return *manifold;
}

const LieAlgebroidData* Document::find_algebroid(const std::string& name) const {
  for (const auto& a : algebroids) {
    if (name.empty() || a.name == name || (a.name.empty() && name == "Q")) return &a.value;
  }
  return nullptr;
}

const VectorField* Document::find_q(const std::string& name) const {
  for (const auto& q : q_fields) {
    if (name.empty() || q.name == name || (q.name.empty() && name == "Q")) return &q.value;
  }
  return nullptr;
}

const StrictLie2Algebra* Document::find_lie2(const std::string& name) const {
  for (const auto& l : lie2algebras) {
    if (name.empty() || l.name == name) return &l.algebra;
  }
  return nullptr;
}

VectorField Document::resolve_q(const std::string& name) const {
  if (const VectorField* q = find_q(name)) return *q;
  if (const LieAlgebroidData* a = find_algebroid(name)) return build_q(*a);
  throw Error(name.empty() ? "document has no q_field or algebroid" : "unresolved reference '" + name + "'");
}

LieAlgebroidData Document::resolve_algebroid(const std::string& name) const {
  if (const LieAlgebroidData* a = find_algebroid(name)) return *a;
  if (const VectorField* q = find_q(name)) return extract_algebroid(*q);
  throw Error(name.empty() ? "document has no algebroid or q_field" : "unresolved reference '" + name + "'");
}

Document parse_document(std::string_view text) {
  Document d;
  Parser p(lex(text), &d);
  p.document();
  return d;
}

Value parse_expression(std::string_view text, Signature sig, const std::map<std::string, VectorField>& env) {
  Parser p(lex(text), nullptr);
  p.set_signature(sig);
  p.set_env(env);
  Value v = p.expression();
  if (!p.at_end()) p.fail(p.peek(), "unexpected " + describe(p.peek()) + " after expression");
  return v;
}

VectorField parse_vector_field(std::string_view text, Signature sig, const std::map<std::string, VectorField>& env) {
  Value v = parse_expression(text, sig, env);
  if (auto* f = std::get_if<Function>(&v)) {
    if (!f->is_zero()) throw ParseError(1, 1, "expected a vector field");
    return VectorField(sig);
  }
  return std::get<VectorField>(v);
}

std::string render_algebroid_block(const LieAlgebroidData& a, const std::string& name) {
  std::ostringstream o;
  o << "algebroid" << (name.empty() ? "" : " " + name) << " {\n";
  for (int i = 0; i < a.rank(); ++i) {
    for (int j = i + 1; j < a.rank(); ++j) {
      for (int k = 0; k < a.rank(); ++k) {
        if (!a.structure(i, j, k).is_zero()) o << "  c[" << indices({i, j, k}) << "] = " << a.structure(i, j, k).to_string() << "\n";
      }
    }
  }
  for (int i = 0; i < a.rank(); ++i) {
    for (int al = 0; al < a.base(); ++al) {
      if (!a.anchor(i, al).is_zero()) o << "  rho[" << indices({i, al}) << "] = " << a.anchor(i, al).to_string() << "\n";
    }
  }
  o << "}\n";
  return o.str();
}

std::string render_q_block(const VectorField& q, const std::string& name) {
  return "q_field" + (name.empty() ? std::string() : " " + name) + " {\n  " + q.to_string() + "\n}\n";
}

std::string render(const Document& d) {
  std::ostringstream o;
  auto sep = [&] {
    if (o.tellp() > 0) o << "\n";
  };
  if (d.manifold) o << "manifold { base = " << d.manifold->base << "; rank = " << d.manifold->rank << " }\n";
  for (const auto& a : d.algebroids) {
    sep();
    o << render_algebroid_block(a.value, a.name);
  }
  for (const auto& q : d.q_fields) {
    sep();
    o << render_q_block(q.value, q.name);
  }
  for (const auto& f : d.fields) {
    sep();
    o << "field " << f.name << " {\n  " << f.value.to_string() << "\n}\n";
  }
  for (const auto& b : d.distributions) {
    sep();
    o << "distribution" << (b.name.empty() ? "" : " " + b.name) << " {\n";
    if (!b.q.empty()) o << "  q = " << b.q << "\n";
    for (const auto& g : b.gens) o << "  gen = " << g.to_string() << "\n";
    o << "}\n";
  }
  for (const auto& b : d.imfoliations) {
    sep();
    o << "imfoliation" << (b.name.empty() ? "" : " " + b.name) << " {\n";
    if (!b.algebroid.empty()) o << "  algebroid = " << b.algebroid << "\n";
    auto vlist = [&](const char* key, const std::vector<VectorField>& v) {
      o << "  " << key << " = [";
      for (std::size_t i = 0; i < v.size(); ++i) o << (i ? ", " : "") << v[i].to_string();
      o << "]\n";
    };
    vlist("B", b.b);
    vlist("F", b.f);
    if (!b.complement.empty()) {
      o << "  complement = [";
      for (std::size_t i = 0; i < b.complement.size(); ++i) o << (i ? ", " : "") << b.complement[i] + 1;
      o << "]\n";
    }
    for (const auto& [key, p] : b.nabla) {
      if (p.is_zero()) continue;
      auto [f, i, j] = key;
      o << "  nabla[" << f + 1 << "][" << indices({i, j}) << "] = " << p.to_string() << "\n";
    }
    if (b.flat_frame) {
      o << "  flat_frame = [";
      for (std::size_t i = 0; i < b.flat_frame->size(); ++i) {
        o << (i ? ", " : "") << "[";
        const auto& row = (*b.flat_frame)[i];
        for (std::size_t j = 0; j < row.size(); ++j) o << (j ? ", " : "") << row[j].to_string();
        o << "]";
      }
      o << "]\n";
    }
    o << "}\n";
  }
  for (const auto& b : d.lie2algebras) {
    sep();
    const auto& l = b.algebra;
    o << "lie2algebra" << (b.name.empty() ? "" : " " + b.name) << " {\n";
    o << "  dim_m1 = " << l.dim_m1() << "\n  dim_0 = " << l.dim_0() << "\n";
    for (int j = 0; j < l.dim_m1(); ++j) {
      for (int i = 0; i < l.dim_0(); ++i) {
        if (l.delta(i, j) != 0) o << "  delta[w" << j + 1 << ",e" << i + 1 << "] = " << scalar_to_string(l.delta(i, j)) << "\n";
      }
    }
    for (int a = 0; a < l.dim_0(); ++a) {
      for (int c = a + 1; c < l.dim_0(); ++c) {
        for (int e = 0; e < l.dim_0(); ++e) {
          if (l.bracket(a, c, e) != 0) {
            o << "  bracket[e" << a + 1 << ",e" << c + 1 << ",e" << e + 1 << "] = " << scalar_to_string(l.bracket(a, c, e)) << "\n";
          }
        }
      }
    }
    for (int a = 0; a < l.dim_0(); ++a) {
      for (int j = 0; j < l.dim_m1(); ++j) {
        for (int k = 0; k < l.dim_m1(); ++k) {
          if (l.action(a, j, k) != 0) {
            o << "  act[e" << a + 1 << ",w" << j + 1 << ",w" << k + 1 << "] = " << scalar_to_string(l.action(a, j, k)) << "\n";
          }
        }
      }
    }
    o << "}\n";
  }
  for (const auto& b : d.actions) {
    sep();
    const auto& phi = b.action;
    o << "action" << (b.name.empty() ? "" : " " + b.name) << " {\n";
    if (!b.algebra.empty()) o << "  algebra = " << b.algebra << "\n";
    if (!b.q.empty()) o << "  q = " << b.q << "\n";
    for (int j = 0; j < phi.dim_m1(); ++j) {
      if (!phi.mu_m1[j].is_zero()) o << "  mu[w" << j + 1 << "] = " << phi.mu_m1[j].to_string() << "\n";
    }
    for (int a = 0; a < phi.dim_0(); ++a) {
      if (!phi.mu0[a].is_zero()) o << "  mu[e" << a + 1 << "] = " << phi.mu0[a].to_string() << "\n";
    }
    for (int a = 0; a < phi.dim_0(); ++a) {
      for (int c = a + 1; c < phi.dim_0(); ++c) {
        VectorField e = phi.eta(a, c);
        if (!e.is_zero()) o << "  eta[e" << a + 1 << "^e" << c + 1 << "] = " << e.to_string() << "\n";
      }
    }
    o << "}\n";
  }
  const Settings& s = d.settings;
  if (s.samples || s.seed || s.max_xi_degree || s.max_base_degree || s.fiber_coords) {
    sep();
    o << "settings {\n";
    if (s.samples) o << "  samples = " << *s.samples << "\n";
    if (s.seed) o << "  seed = " << *s.seed << "\n";
    if (s.max_xi_degree) o << "  max_xi_degree = " << *s.max_xi_degree << "\n";
    if (s.max_base_degree) o << "  max_base_degree = " << *s.max_base_degree << "\n";
    if (s.fiber_coords) {
      o << "  fiber_coords = [";
      for (std::size_t i = 0; i < s.fiber_coords->size(); ++i) o << (i ? ", " : "") << (*s.fiber_coords)[i] + 1;
      o << "]\n";
    }
    o << "}\n";
  }
  return o.str();
}

IMFoliation to_imfoliation(const Document& d, const IMFoliationBlock& b) {
  IMFoliation out;
  out.algebroid = d.resolve_algebroid(b.algebroid);
  const Signature sig = out.algebroid.signature();
  const int n = sig.base, r = sig.rank, k = static_cast<int>(b.b.size());
  ClassicalTriple& t = out.triple;
  t.sig = sig;
  t.B = PolyMatrix(r, k);
  for (int j = 0; j < k; ++j) {
    check_signature(b.b[j].signature(), sig);
    Section s = field_section(b.b[j]);
    for (int i = 0; i < r; ++i) t.B(i, j) = s[i];
  }
  for (const auto& f : b.f) t.F.push_back(symbol(f));
  t.complement = b.complement.empty() ? greedy_complement(t.B, Point(n, Scalar(0))) : b.complement;
  const int m = t.quotient_rank();
  if (k + m != r) throw Error("imfoliation '" + b.name + "': B and the complement do not add up to the rank");
  for (std::size_t f = 0; f < t.F.size(); ++f) {
    PolyMatrix z(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) z(i, j) = Poly(n);
    }
    t.nabla.push_back(std::move(z));
  }
  for (const auto& [key, p] : b.nabla) {
    auto [f, i, j] = key;
    if (f >= static_cast<int>(t.F.size()) || i >= m || j >= m) {
      throw Error("imfoliation '" + b.name + "': nabla index out of range");
    }
    t.nabla[f](i, j) = p;
  }
  if (b.flat_frame) {
    const auto& rows = *b.flat_frame;
    if (static_cast<int>(rows.size()) != m) throw Error("imfoliation '" + b.name + "': flat_frame must be square of size " + std::to_string(m));
    PolyMatrix phi(m, m);
    for (int i = 0; i < m; ++i) {
      if (static_cast<int>(rows[i].size()) != m) throw Error("imfoliation '" + b.name + "': flat_frame must be square");
      for (int j = 0; j < m; ++j) phi(i, j) = rows[i][j];
    }
    out.flat_frame = std::move(phi);
  }
  return out;
}

}  // namespace nq1
