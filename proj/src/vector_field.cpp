#include "nq1/vector_field.hpp"

namespace nq1 {

VectorField::VectorField(Signature sig)
    : sig_(sig), even_(sig.base, Function(sig)), odd_(sig.rank, Function(sig)) {}

VectorField::VectorField(Signature sig, std::vector<Function> even, std::vector<Function> odd)
    : sig_(sig), even_(std::move(even)), odd_(std::move(odd)) {
  if (static_cast<int>(even_.size()) != sig.base || static_cast<int>(odd_.size()) != sig.rank) {
    throw SignatureMismatch("vector field coefficient count does not match signature");
  }
  for (auto& f : even_) {
    if (f.is_zero()) f = Function(sig);
    check_signature(f.signature(), sig);
  }
  for (auto& f : odd_) {
    if (f.is_zero()) f = Function(sig);
    check_signature(f.signature(), sig);
  }
  refresh();
}

VectorField VectorField::d_even(Signature sig, int i) {
  VectorField x(sig);
  x.even_.at(i) = Function::constant(sig, 1);
  x.refresh();
  return x;
}

VectorField VectorField::d_odd(Signature sig, int a) {
  VectorField x(sig);
  x.odd_.at(a) = Function::constant(sig, 1);
  x.refresh();
  return x;
}

void VectorField::refresh() {
  std::optional<int> deg;
  bool homogeneous = true;
  auto visit = [&](const Function& f, int shift) {
    for (const auto& [m, c] : f.terms()) {
      int d = m.degree() - shift;
      if (!deg) {
        deg = d;
      } else if (*deg != d) {
        homogeneous = false;
      }
    }
  };
  for (const auto& f : even_) visit(f, 0);
  for (const auto& f : odd_) visit(f, 1);
  homogeneous_ = homogeneous;
  degree_ = homogeneous ? deg : std::nullopt;
}

bool VectorField::is_zero() const {
  for (const auto& f : even_) {
    if (!f.is_zero()) return false;
  }
  for (const auto& f : odd_) {
    if (!f.is_zero()) return false;
  }
  return true;
}

std::map<int, VectorField> VectorField::parts() const {
  std::map<int, VectorField> out;
  auto slot = [&](int d) -> VectorField& { return out.try_emplace(d, sig_).first->second; };
  for (int i = 0; i < sig_.base; ++i) {
    for (const auto& [k, f] : even_[i].degree_parts()) slot(k).even_[i] = f;
  }
  for (int a = 0; a < sig_.rank; ++a) {
    for (const auto& [k, f] : odd_[a].degree_parts()) slot(k - 1).odd_[a] = f;
  }
  for (auto& [d, x] : out) x.refresh();
  return out;
}

void VectorField::require_degree(int d, const char* what) const {
  if (is_zero()) return;
  if (!homogeneous_ || !degree_ || *degree_ != d) {
    throw DegreeError(std::string(what) + ": expected a homogeneous vector field of degree " +
                      std::to_string(d));
  }
}

VectorField& VectorField::operator+=(const VectorField& o) {
  if (sig_ == Signature{} && even_.empty() && odd_.empty()) *this = VectorField(o.sig_);
  check_signature(sig_, o.sig_);
  for (int i = 0; i < sig_.base; ++i) even_[i] += o.even_[i];
  for (int a = 0; a < sig_.rank; ++a) odd_[a] += o.odd_[a];
  refresh();
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  if (sig_ == Signature{} && even_.empty() && odd_.empty()) *this = VectorField(o.sig_);
  check_signature(sig_, o.sig_);
  for (int i = 0; i < sig_.base; ++i) even_[i] -= o.even_[i];
  for (int a = 0; a < sig_.rank; ++a) odd_[a] -= o.odd_[a];
  refresh();
  return *this;
}

VectorField VectorField::operator-() const {
  VectorField r = *this;
  for (auto& f : r.even_) f = -f;
  for (auto& f : r.odd_) f = -f;
  return r;
}

VectorField operator*(const Scalar& c, const VectorField& x) {
  VectorField r = x;
  for (auto& f : r.even_) f *= c;
  for (auto& f : r.odd_) f *= c;
  r.refresh();
  return r;
}

VectorField operator*(const Function& f, const VectorField& x) {
  check_signature(f.is_zero() ? x.sig_ : f.signature(), x.sig_);
  VectorField r(x.sig_);
  for (int i = 0; i < x.sig_.base; ++i) r.even_[i] = f * x.even_[i];
  for (int a = 0; a < x.sig_.rank; ++a) r.odd_[a] = f * x.odd_[a];
  r.refresh();
  return r;
}

bool VectorField::operator==(const VectorField& o) const {
  if (is_zero() && o.is_zero()) return true;
  return sig_ == o.sig_ && even_ == o.even_ && odd_ == o.odd_;
}

namespace {

std::string render_component(const Function& f, const std::string& op, bool& first) {
  std::string s;
  if (f.is_zero()) return s;
  std::size_t nterms = 0;
  for (const auto& [m, p] : f.terms()) nterms += p.terms().size();
  if (nterms == 1) {
    const auto& [m, p] = *f.terms().begin();
    const auto& [e, c] = *p.terms().begin();
    auto [neg, body] = render_term(c, e, m);
    std::string piece = body == "1" ? op : body + "*" + op;
    if (first) {
      s = (neg ? "-" : "") + piece;
    } else {
      s = (neg ? " - " : " + ") + piece;
    }
  } else {
    std::string piece = "(" + f.to_string() + ")*" + op;
    s = first ? piece : " + " + piece;
  }
  first = false;
  return s;
}

}  // namespace

std::string VectorField::to_string() const {
  std::string s;
  bool first = true;
  for (int i = 0; i < sig_.base; ++i) s += render_component(even_[i], "d/dx" + std::to_string(i + 1), first);
  for (int a = 0; a < sig_.rank; ++a) s += render_component(odd_[a], "d/dxi" + std::to_string(a + 1), first);
  return first ? "0" : s;
}

bool TangentFiberVector::is_zero() const {
  for (const auto& c : fiber) {
    if (c != 0) return false;
  }
  for (const auto& c : tangent) {
    if (c != 0) return false;
  }
  return true;
}

Function apply(const VectorField& x, const Function& f) {
  const Signature& sig = x.signature();
  if (!f.is_zero()) check_signature(sig, f.signature());
  Function r(sig);
  if (f.is_zero()) return r;
  for (int i = 0; i < sig.base; ++i) {
    if (!x.even(i).is_zero()) r += x.even(i) * f.derivative_even(i);
  }
  for (int a = 0; a < sig.rank; ++a) {
    if (!x.odd(a).is_zero()) r += x.odd(a) * f.derivative_odd(a);
  }
  return r;
}

VectorField bracket(const VectorField& x, const VectorField& y) {
  check_signature(x.signature(), y.signature());
  const Signature sig = x.signature();
  std::vector<Function> even(sig.base, Function(sig)), odd(sig.rank, Function(sig));
  const auto xparts = x.parts();
  const auto yparts = y.parts();
  for (const auto& [p, xp] : xparts) {
    for (const auto& [q, yq] : yparts) {
      const bool minus = (p * q) % 2 == 0;
      for (int i = 0; i < sig.base; ++i) {
        Function t = apply(xp, yq.even(i));
        Function u = apply(yq, xp.even(i));
        even[i] += minus ? t - u : t + u;
      }
      for (int a = 0; a < sig.rank; ++a) {
        Function t = apply(xp, yq.odd(a));
        Function u = apply(yq, xp.odd(a));
        odd[a] += minus ? t - u : t + u;
      }
    }
  }
  return VectorField(sig, std::move(even), std::move(odd));
}

TangentFiberVector evaluate(const VectorField& x, const Point& p) {
  const Signature& sig = x.signature();
  if (static_cast<int>(p.size()) != sig.base) throw SignatureMismatch("point has wrong dimension");
  if (!x.is_homogeneous()) throw DegreeError("evaluate: field is not homogeneous");
  TangentFiberVector v{p, std::vector<Scalar>(sig.rank, 0), std::vector<Scalar>(sig.base, 0)};
  if (x.is_zero()) return v;
  if (*x.degree() == -1) {
    for (int a = 0; a < sig.rank; ++a) v.fiber[a] = x.odd(a).coefficient(OddMonomial{}).evaluate(p);
  } else if (*x.degree() == 0) {
    for (int i = 0; i < sig.base; ++i) v.tangent[i] = x.even(i).coefficient(OddMonomial{}).evaluate(p);
  } else {
    throw DegreeError("evaluate: only degree -1 and 0 fields can be evaluated");
  }
  return v;
}

HomologicalCheck is_homological(const VectorField& q) {
  q.require_degree(1, "is_homological");
  HomologicalCheck out;
  out.square = bracket(q, q);
  const Signature& sig = q.signature();
  for (int i = 0; i < sig.base && out.witness.empty(); ++i) {
    if (!out.square.even(i).is_zero()) {
      out.witness = "[Q,Q](x" + std::to_string(i + 1) + ") = " + out.square.even(i).to_string();
    }
  }
  for (int a = 0; a < sig.rank && out.witness.empty(); ++a) {
    if (!out.square.odd(a).is_zero()) {
      out.witness = "[Q,Q](xi" + std::to_string(a + 1) + ") = " + out.square.odd(a).to_string();
    }
  }
  out.homological = out.witness.empty();
  return out;
}

std::vector<Poly> symbol(const VectorField& x) {
  std::vector<Poly> s;
  const int n = x.signature().base;
  s.reserve(n);
  for (int i = 0; i < n; ++i) {
    Poly p(n);
    p += x.even(i).coefficient(OddMonomial{});
    s.push_back(std::move(p));
  }
  return s;
}

}  // namespace nq1
