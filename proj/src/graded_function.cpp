#include "nq1/graded_function.hpp"

#include <algorithm>

namespace nq1 {

void check_signature(const Signature& a, const Signature& b) {
  if (!(a == b)) {
    throw SignatureMismatch("signature mismatch: (n=" + std::to_string(a.base) + ", r=" +
                            std::to_string(a.rank) + ") vs (n=" + std::to_string(b.base) +
                            ", r=" + std::to_string(b.rank) + ")");
  }
}

OddMonomial OddMonomial::from_indices(const std::vector<int>& idx) {
  std::uint32_t bits = 0;
  for (int a : idx) {
    if (a < 0 || a >= kMaxRank) throw Error("odd index out of range");
    std::uint32_t b = std::uint32_t{1} << a;
    if (bits & b) throw Error("repeated odd index");
    bits |= b;
  }
  return OddMonomial(bits);
}

std::vector<int> OddMonomial::indices() const {
  std::vector<int> r;
  for (int a = 0; a < 32; ++a) {
    if (contains(a)) r.push_back(a);
  }
  return r;
}

bool OddOrder::operator()(const OddMonomial& a, const OddMonomial& b) const {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  std::uint32_t x = a.bits(), y = b.bits();
  while (x && y) {
    int i = std::countr_zero(x), j = std::countr_zero(y);
    if (i != j) return i < j;
    x &= x - 1;
    y &= y - 1;
  }
  return false;
}

int koszul_sign(OddMonomial a, OddMonomial b) {
  if (a.bits() & b.bits()) return 0;
  int inversions = 0;
  for (std::uint32_t y = b.bits(); y; y &= y - 1) {
    int j = std::countr_zero(y);
    std::uint32_t above = a.bits() & ~((std::uint32_t{2} << j) - 1);
    inversions += std::popcount(above);
  }
  return (inversions % 2) ? -1 : 1;
}

std::vector<OddMonomial> odd_monomials_of_degree(int rank, int degree) {
  std::vector<OddMonomial> out;
  if (degree < 0 || degree > rank) return out;
  for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << rank); ++bits) {
    if (std::popcount(bits) == degree) out.emplace_back(bits);
  }
  std::sort(out.begin(), out.end(), OddOrder{});
  return out;
}

Function Function::constant(Signature sig, const Scalar& c) {
  return monomial(sig, OddMonomial{}, Poly(sig.base, c));
}

Function Function::from_poly(Signature sig, const Poly& p) { return monomial(sig, OddMonomial{}, p); }

Function Function::even_generator(Signature sig, int i) {
  return from_poly(sig, Poly::variable(sig.base, i));
}

Function Function::odd_generator(Signature sig, int a) {
  if (a < 0 || a >= sig.rank) throw Error("odd generator index out of range");
  return monomial(sig, OddMonomial::generator(a), Poly(sig.base, 1));
}

Function Function::monomial(Signature sig, OddMonomial m, const Poly& coeff) {
  Function f(sig);
  f.add_term(m, coeff);
  return f;
}

Poly Function::coefficient(OddMonomial m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Poly(sig_.base) : it->second;
}

void Function::add_term(OddMonomial m, const Poly& coeff) {
  if (coeff.is_zero()) return;
  if (m.span() > sig_.rank) throw SignatureMismatch("odd monomial exceeds rank");
  if (coeff.nvars() != 0 && coeff.nvars() != sig_.base) {
    throw SignatureMismatch("coefficient has wrong number of variables");
  }
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    Poly p(sig_.base);
    p += coeff;
    terms_.emplace(m, std::move(p));
  } else {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

std::optional<int> Function::degree() const {
  if (terms_.empty()) return std::nullopt;
  int d = terms_.begin()->first.degree();
  for (const auto& [m, c] : terms_) {
    if (m.degree() != d) return std::nullopt;
  }
  return d;
}

bool Function::is_homogeneous() const { return terms_.empty() || degree().has_value(); }

std::map<int, Function> Function::degree_parts() const {
  std::map<int, Function> parts;
  for (const auto& [m, c] : terms_) {
    auto [it, _] = parts.try_emplace(m.degree(), sig_);
    it->second.add_term(m, c);
  }
  return parts;
}

Function Function::part(int k) const {
  Function f(sig_);
  for (const auto& [m, c] : terms_) {
    if (m.degree() == k) f.add_term(m, c);
  }
  return f;
}

Function& Function::operator+=(const Function& o) {
  if (&o == this) return *this *= 2;
  if (o.terms_.empty()) return *this;
  if (terms_.empty() && sig_ == Signature{}) sig_ = o.sig_;
  check_signature(sig_, o.sig_);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Function& Function::operator-=(const Function& o) {
  if (&o == this) return *this *= 0;
  if (o.terms_.empty()) return *this;
  if (terms_.empty() && sig_ == Signature{}) sig_ = o.sig_;
  check_signature(sig_, o.sig_);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Function& Function::operator*=(const Scalar& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, p] : terms_) p *= c;
  return *this;
}

Function operator*(const Poly& p, const Function& f) {
  Function r(f.sig_);
  if (p.is_zero()) return r;
  for (const auto& [m, c] : f.terms_) r.add_term(m, p * c);
  return r;
}

Function operator*(const Function& a, const Function& b) {
  check_signature(a.sig_, b.sig_);
  Function r(a.sig_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      int s = koszul_sign(ma, mb);
      if (s == 0) continue;
      Poly c = ca * cb;
      if (s < 0) c = -c;
      r.add_term(OddMonomial(ma.bits() | mb.bits()), c);
    }
  }
  return r;
}

Function Function::operator-() const {
  Function r = *this;
  for (auto& [m, p] : r.terms_) p = -p;
  return r;
}

bool Function::operator==(const Function& o) const {
  if (terms_.empty() && o.terms_.empty()) return true;
  return sig_ == o.sig_ && terms_ == o.terms_;
}

Function Function::derivative_even(int i) const {
  if (i < 0 || i >= sig_.base) throw Error("even derivative index out of range");
  Function r(sig_);
  for (const auto& [m, c] : terms_) r.add_term(m, c.derivative(i));
  return r;
}

Function Function::derivative_odd(int a) const {
  if (a < 0 || a >= sig_.rank) throw Error("odd derivative index out of range");
  Function r(sig_);
  const std::uint32_t bit = std::uint32_t{1} << a;
  for (const auto& [m, c] : terms_) {
    if (!(m.bits() & bit)) continue;
    int position = std::popcount(m.bits() & (bit - 1));
    r.add_term(OddMonomial(m.bits() & ~bit), position % 2 ? -c : c);
  }
  return r;
}

Function Function::evaluate_base(std::span<const Scalar> p) const {
  if (static_cast<int>(p.size()) != sig_.base) throw SignatureMismatch("point has wrong dimension");
  Function r(sig_);
  for (const auto& [m, c] : terms_) r.add_term(m, Poly(sig_.base, c.evaluate(p)));
  return r;
}

std::pair<bool, std::string> render_term(const Scalar& c, const Exponent& e, OddMonomial m) {
  std::string factors = exponent_to_string(e);
  std::string odd;
  for (int a : m.indices()) {
    if (!odd.empty()) odd += '^';
    odd += "xi" + std::to_string(a + 1);
  }
  if (!odd.empty()) factors += (factors.empty() ? "" : "*") + odd;
  Scalar a = abs(c);
  std::string body;
  if (factors.empty()) {
    body = scalar_to_string(a);
  } else if (a == 1) {
    body = factors;
  } else {
    body = scalar_to_string(a) + "*" + factors;
  }
  return {c < 0, body};
}

std::string Function::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [m, p] : terms_) {
    for (const auto& [e, c] : p.terms()) {
      auto [neg, body] = render_term(c, e, m);
      if (first) {
        s += (neg ? "-" : "") + body;
      } else {
        s += (neg ? " - " : " + ") + body;
      }
      first = false;
    }
  }
  return s;
}

}  // namespace nq1
