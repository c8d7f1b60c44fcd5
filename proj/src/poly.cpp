#include "nq1/poly.hpp"

#include <algorithm>
#include <numeric>

namespace nq1 {

std::string scalar_to_string(const Scalar& c) { return c.get_str(); }

bool ExponentOrder::operator()(const Exponent& a, const Exponent& b) const {
  int da = std::accumulate(a.begin(), a.end(), 0);
  int db = std::accumulate(b.begin(), b.end(), 0);
  if (da != db) return da > db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

Poly::Poly(int nvars, const Scalar& c) : nvars_(nvars) {
  if (c != 0) terms_.emplace(Exponent(nvars, 0), c);
}

Poly Poly::variable(int nvars, int i) {
  if (i < 0 || i >= nvars) throw Error("variable index out of range");
  Exponent e(nvars, 0);
  e[i] = 1;
  return monomial(nvars, std::move(e), 1);
}

Poly Poly::monomial(int nvars, Exponent e, const Scalar& c) {
  if (static_cast<int>(e.size()) != nvars) throw Error("exponent length mismatch");
  Poly p(nvars);
  if (c != 0) p.terms_.emplace(std::move(e), c);
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && total_degree() == 0);
}

Scalar Poly::constant_term() const {
  auto it = terms_.find(Exponent(nvars_, 0));
  return it == terms_.end() ? Scalar(0) : it->second;
}

int Poly::total_degree() const {
  if (terms_.empty()) return -1;
  const auto& e = terms_.begin()->first;
  return std::accumulate(e.begin(), e.end(), 0);
}

int Poly::degree_in(int i) const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[i]);
  return d;
}

void Poly::promote(int n) {
  if (nvars_ == n) return;
  if (nvars_ != 0) throw SignatureMismatch("polynomials in different numbers of variables");
  Terms t;
  for (auto& [e, c] : terms_) t.emplace(Exponent(n, 0), c);
  terms_ = std::move(t);
  nvars_ = n;
}

void Poly::check_compatible(const Poly& o) {
  if (nvars_ == o.nvars_) return;
  if (o.nvars_ == 0) return;
  promote(o.nvars_);
}

void Poly::add_term(const Exponent& e, const Scalar& value) {
  Scalar c(value);
  c.canonicalize();
  if (c == 0) return;
  if (static_cast<int>(e.size()) != nvars_) {
    if (nvars_ == 0 && terms_.empty()) {
      nvars_ = static_cast<int>(e.size());
    } else {
      promote(static_cast<int>(e.size()));
    }
  }
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Poly& Poly::operator+=(const Poly& o) {
  if (&o == this) return *this *= 2;
  check_compatible(o);
  for (const auto& [e, c] : o.terms_) {
    if (o.nvars_ == nvars_) {
      add_term(e, c);
    } else {
      add_term(Exponent(nvars_, 0), c);
    }
  }
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (&o == this) return *this *= 0;
  check_compatible(o);
  for (const auto& [e, c] : o.terms_) {
    if (o.nvars_ == nvars_) {
      add_term(e, -c);
    } else {
      add_term(Exponent(nvars_, 0), -c);
    }
  }
  return *this;
}

Poly& Poly::operator*=(const Scalar& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) {
    return Poly(std::max(a.nvars_, b.nvars_));
  }
  Poly x = a, y = b;
  x.check_compatible(y);
  y.check_compatible(x);
  Poly r(x.nvars_);
  Exponent e(x.nvars_);
  for (const auto& [ea, ca] : x.terms_) {
    for (const auto& [eb, cb] : y.terms_) {
      for (int i = 0; i < x.nvars_; ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

bool Poly::operator==(const Poly& o) const {
  if (terms_.empty() && o.terms_.empty()) return true;
  if (nvars_ == o.nvars_) return terms_ == o.terms_;
  Poly a = *this, b = o;
  a.check_compatible(b);
  b.check_compatible(a);
  return a.terms_ == b.terms_;
}

Poly Poly::derivative(int i) const {
  Poly r(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    Exponent f = e;
    f[i] -= 1;
    r.add_term(f, c * e[i]);
  }
  return r;
}

Scalar Poly::evaluate(std::span<const Scalar> p) const {
  if (static_cast<int>(p.size()) < nvars_) throw SignatureMismatch("evaluation point has too few coordinates");
  Scalar sum = 0;
  for (const auto& [e, c] : terms_) {
    Scalar t = c;
    for (int i = 0; i < nvars_; ++i) {
      for (int k = 0; k < e[i]; ++k) t *= p[i];
    }
    sum += t;
  }
  return sum;
}

std::optional<Poly> Poly::divide_exact(const Poly& d) const {
  if (d.is_zero()) throw Error("division by the zero polynomial");
  Poly rem = *this;
  Poly den = d;
  rem.check_compatible(den);
  den.check_compatible(rem);
  const int n = rem.nvars_;
  Poly q(n);
  const auto& [lte, ltc] = *den.terms_.begin();
  Exponent e(n);
  while (!rem.is_zero()) {
    const auto& [re, rc] = *rem.terms_.begin();
    for (int i = 0; i < n; ++i) {
      e[i] = re[i] - lte[i];
      if (e[i] < 0) return std::nullopt;
    }
    Poly t = Poly::monomial(n, e, rc / ltc);
    q += t;
    rem -= t * den;
  }
  return q;
}

Poly Poly::drop_variables(const std::vector<int>& dropped) const {
  std::vector<bool> drop(nvars_, false);
  for (int i : dropped) drop.at(i) = true;
  int m = nvars_ - static_cast<int>(std::count(drop.begin(), drop.end(), true));
  Poly r(m);
  for (const auto& [e, c] : terms_) {
    Exponent f;
    f.reserve(m);
    for (int i = 0; i < nvars_; ++i) {
      if (drop[i]) {
        if (e[i] != 0) throw Error("dropped variable occurs in polynomial");
      } else {
        f.push_back(e[i]);
      }
    }
    r.add_term(f, c);
  }
  return r;
}

std::string exponent_to_string(const Exponent& e) {
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!s.empty()) s += '*';
    s += "x" + std::to_string(i + 1);
    if (e[i] > 1) s += "^" + std::to_string(e[i]);
  }
  return s;
}

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    std::string mono = exponent_to_string(e);
    Scalar a = abs(c);
    std::string body;
    if (mono.empty()) {
      body = scalar_to_string(a);
    } else if (a == 1) {
      body = mono;
    } else {
      body = scalar_to_string(a) + "*" + mono;
    }
    if (first) {
      s += (c < 0 ? "-" : "") + body;
    } else {
      s += (c < 0 ? " - " : " + ") + body;
    }
    first = false;
  }
  return s;
}

}  // namespace nq1
