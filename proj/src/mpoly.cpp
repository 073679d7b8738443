#include "sympfact/mpoly.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace sympfact {

namespace {

using Term = MPoly::Term;

bool descending(const Term& a, const Term& b) { return a.mono > b.mono; }

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial r;
  unsigned over = 0;
  for (int s = 0; s < kSlots; ++s) {
    const unsigned v = unsigned(a.e[s]) + unsigned(b.e[s]);
    r.e[s] = static_cast<std::uint8_t>(v);
    over |= v;
  }
  if (over > 255) throw std::overflow_error("monomial exponent exceeds 255");
  return r;
}

bool divides(const Monomial& d, const Monomial& m) {
  for (int s = 0; s < kSlots; ++s)
    if (d.e[s] > m.e[s]) return false;
  return true;
}

Monomial mono_div(const Monomial& m, const Monomial& d) {
  Monomial r;
  for (int s = 0; s < kSlots; ++s) r.e[s] = static_cast<std::uint8_t>(m.e[s] - d.e[s]);
  return r;
}

bool integral(const std::vector<Term>& ts) {
  for (const auto& t : ts)
    if (mpz_cmp_ui(t.coef.get_den_mpz_t(), 1) != 0) return false;
  return true;
}

// Sorts, merges equal monomials and drops zeros.
std::vector<Term> normalize(std::vector<Term> ts) {
  std::sort(ts.begin(), ts.end(), descending);
  std::vector<Term> out;
  out.reserve(ts.size());
  for (auto& t : ts) {
    if (!out.empty() && out.back().mono == t.mono) {
      out.back().coef += t.coef;
    } else {
      if (!out.empty() && is_zero(out.back().coef)) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && is_zero(out.back().coef)) out.pop_back();
  return out;
}

std::vector<Term> merge(const std::vector<Term>& a, const std::vector<Term>& b, bool subtract) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].mono > b[j].mono)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].mono > a[i].mono) {
      out.push_back(b[j++]);
      if (subtract) out.back().coef = -out.back().coef;
    } else {
      Rat c = subtract ? Rat(a[i].coef - b[j].coef) : Rat(a[i].coef + b[j].coef);
      if (!is_zero(c)) out.push_back(Term{a[i].mono, std::move(c)});
      ++i;
      ++j;
    }
  }
  return out;
}

// Recursive-descent reader for the text format documented on MPoly::parse.
class Parser {
 public:
  Parser(std::string_view text, int n) : s_(text), n_(n) {}

  MPoly run() {
    MPoly p = expr();
    skip();
    if (k_ != s_.size()) fail("unexpected character");
    return p;
  }

 private:
  [[noreturn]] void fail(const char* what) const {
    throw std::invalid_argument(std::string("polynomial parse error (") + what + ") at offset " +
                                std::to_string(k_) + " in \"" + std::string(s_) + "\"");
  }
  void skip() {
    while (k_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[k_]))) ++k_;
  }
  bool peek(char c) {
    skip();
    return k_ < s_.size() && s_[k_] == c;
  }
  std::string_view digits() {
    const std::size_t b = k_;
    while (k_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k_]))) ++k_;
    if (b == k_) fail("expected digits");
    return s_.substr(b, k_ - b);
  }

  MPoly expr() {
    MPoly sum;
    bool first = true;
    for (;;) {
      bool negative = false;
      if (peek('+') || peek('-')) {
        negative = s_[k_] == '-';
        ++k_;
      } else if (!first) {
        return sum;
      }
      MPoly t = term();
      sum += negative ? -t : t;
      first = false;
      skip();
      if (k_ == s_.size() || s_[k_] == ')') return sum;
    }
  }

  MPoly term() {
    MPoly prod = factor();
    for (;;) {
      skip();
      if (k_ == s_.size()) return prod;
      const char c = s_[k_];
      if (c == '*') {
        ++k_;
        prod *= factor();
      } else if (c == '(' || std::isalnum(static_cast<unsigned char>(c))) {
        prod *= factor();
      } else {
        return prod;
      }
    }
  }

  MPoly factor() {
    skip();
    if (k_ == s_.size()) fail("expected factor");
    MPoly base;
    const char c = s_[k_];
    if (c == '(') {
      ++k_;
      base = expr();
      if (!peek(')')) fail("expected ')'");
      ++k_;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num(digits());
      if (k_ < s_.size() && s_[k_] == '/') {
        ++k_;
        num += "/";
        num += digits();
      }
      base = MPoly(parse_rat(num));
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t b = k_++;
      while (k_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[k_])) || s_[k_] == '_')) ++k_;
      base = MPoly::var(parse_var(s_.substr(b, k_ - b), n_));
    } else {
      fail("expected factor");
    }
    if (peek('^')) {
      ++k_;
      skip();
      const int e = std::stoi(std::string(digits()));
      MPoly r(1);
      for (int t = 0; t < e; ++t) r *= base;
      return r;
    }
    return base;
  }

  std::string_view s_;
  int n_;
  std::size_t k_ = 0;
};

}  // namespace

unsigned Monomial::degree() const {
  unsigned d = 0;
  for (auto x : e) d += x;
  return d;
}

void Point::set(VarId v, const Rat& value) {
  values_[v.slot()] = value;
  defined_.set(v.slot());
}

const Rat& Point::at(VarId v) const {
  if (!has(v)) throw std::out_of_range("unassigned variable " + var_name(v, 3));
  return values_[v.slot()];
}

std::vector<VarId> Point::variables() const {
  std::vector<VarId> vs;
  for (int s = 0; s < kSlots; ++s)
    if (defined_[s]) vs.push_back(VarId::from_slot(s));
  return vs;
}

MPoly::MPoly(long c) : MPoly(Rat(c)) {}

MPoly::MPoly(const Rat& c) {
  if (!sympfact::is_zero(c)) terms_.push_back(Term{Monomial{}, c});
}

MPoly MPoly::var(VarId v) {
  MPoly p;
  Term t{Monomial{}, Rat(1)};
  t.mono.e[v.slot()] = 1;
  p.terms_.push_back(std::move(t));
  return p;
}

MPoly MPoly::from_sorted(std::vector<Term> terms) {
  MPoly p;
  p.terms_ = std::move(terms);
  return p;
}

MPoly MPoly::parse(std::string_view text, int n) { return Parser(text, n).run(); }

bool MPoly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.degree() == 0); }

Rat MPoly::constant_term() const {
  if (!terms_.empty() && terms_.back().mono.degree() == 0) return terms_.back().coef;
  return Rat(0);
}

MPoly& MPoly::operator+=(const MPoly& o) {
  if (o.terms_.empty()) return *this;
  terms_ = merge(terms_, o.terms_, false);
  return *this;
}

MPoly& MPoly::operator-=(const MPoly& o) {
  if (o.terms_.empty()) return *this;
  terms_ = merge(terms_, o.terms_, true);
  return *this;
}

MPoly& MPoly::operator*=(const MPoly& o) {
  *this = poly_mul(*this, o);
  return *this;
}

MPoly MPoly::operator-() const {
  MPoly r = *this;
  for (auto& t : r.terms_) t.coef = -t.coef;
  return r;
}

MPoly operator*(const MPoly& a, const MPoly& b) { return poly_mul(a, b); }

bool operator==(const MPoly& a, const MPoly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t k = 0; k < a.terms_.size(); ++k)
    if (!(a.terms_[k].mono == b.terms_[k].mono) || a.terms_[k].coef != b.terms_[k].coef) return false;
  return true;
}

MPoly poly_mul(const MPoly& x, const MPoly& y) {
  if (x.is_zero() || y.is_zero()) return MPoly();
  const MPoly& a = x.size() <= y.size() ? x : y;
  const MPoly& b = x.size() <= y.size() ? y : x;
  // Shifting by a fixed monomial preserves the order, so one-term factors need no sort.
  if (a.size() == 1) {
    std::vector<Term> out;
    out.reserve(b.size());
    for (const auto& t : b.terms_) out.push_back(Term{mono_mul(a.terms_[0].mono, t.mono), a.terms_[0].coef * t.coef});
    return MPoly::from_sorted(std::move(out));
  }
  struct Prod {
    Monomial m;
    std::uint32_t ia, ib;
  };
  std::vector<Prod> prods;
  prods.reserve(a.size() * b.size());
  for (std::uint32_t i = 0; i < a.size(); ++i)
    for (std::uint32_t j = 0; j < b.size(); ++j) prods.push_back(Prod{mono_mul(a.terms_[i].mono, b.terms_[j].mono), i, j});
  std::sort(prods.begin(), prods.end(), [](const Prod& p, const Prod& q) { return p.m > q.m; });

  std::vector<Term> out;
  const bool ints = integral(a.terms_) && integral(b.terms_);
  mpz_class zacc;
  Rat qacc, tmp;
  for (std::size_t k = 0; k < prods.size();) {
    std::size_t e = k;
    if (ints) {
      zacc = 0;
      for (; e < prods.size() && prods[e].m == prods[k].m; ++e)
        mpz_addmul(zacc.get_mpz_t(), a.terms_[prods[e].ia].coef.get_num_mpz_t(), b.terms_[prods[e].ib].coef.get_num_mpz_t());
      if (zacc != 0) out.push_back(Term{prods[k].m, Rat(zacc)});
    } else {
      qacc = 0;
      for (; e < prods.size() && prods[e].m == prods[k].m; ++e) {
        mpq_mul(tmp.get_mpq_t(), a.terms_[prods[e].ia].coef.get_mpq_t(), b.terms_[prods[e].ib].coef.get_mpq_t());
        qacc += tmp;
      }
      if (!is_zero(qacc)) out.push_back(Term{prods[k].m, qacc});
    }
    k = e;
  }
  return MPoly::from_sorted(std::move(out));
}

MPoly MPoly::scaled(const Rat& c) const {
  if (sympfact::is_zero(c)) return MPoly();
  MPoly r = *this;
  for (auto& t : r.terms_) t.coef *= c;
  return r;
}

// Lowering one exponent keeps relative order and cannot collide.
MPoly MPoly::diff(VarId v) const {
  const int s = v.slot();
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (t.mono.e[s] == 0) continue;
    Term d{t.mono, t.coef * t.mono.e[s]};
    --d.mono.e[s];
    out.push_back(std::move(d));
  }
  return from_sorted(std::move(out));
}

MPoly MPoly::coefficient(VarId v, int power) const {
  const int s = v.slot();
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (t.mono.e[s] != power) continue;
    out.push_back(t);
    out.back().mono.e[s] = 0;
  }
  return from_sorted(std::move(out));
}

int MPoly::degree_in(VarId v) const {
  if (terms_.empty()) return -1;
  int d = 0;
  for (const auto& t : terms_) d = std::max<int>(d, t.mono.e[v.slot()]);
  return d;
}

unsigned MPoly::total_degree() const {
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.degree());
  return d;
}

std::vector<VarId> MPoly::variables() const {
  std::array<bool, kSlots> seen{};
  for (const auto& t : terms_)
    for (int s = 0; s < kSlots; ++s) seen[s] = seen[s] || t.mono.e[s] != 0;
  std::vector<VarId> vs;
  for (int s = 0; s < kSlots; ++s)
    if (seen[s]) vs.push_back(VarId::from_slot(s));
  return vs;
}

Rat MPoly::evaluate(const Point& p) const {
  Rat total(0), term;
  for (const auto& t : terms_) {
    term = t.coef;
    for (int s = 0; s < kSlots; ++s)
      for (int k = 0; k < t.mono.e[s]; ++k) term *= p.at(VarId::from_slot(s));
    total += term;
  }
  return total;
}

MPoly MPoly::substitute(const Point& p) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    Term r = t;
    for (int s = 0; s < kSlots; ++s) {
      const VarId v = VarId::from_slot(s);
      if (r.mono.e[s] == 0 || !p.has(v)) continue;
      for (int k = 0; k < r.mono.e[s]; ++k) r.coef *= p.at(v);
      r.mono.e[s] = 0;
    }
    if (!sympfact::is_zero(r.coef)) out.push_back(std::move(r));
  }
  return from_sorted(normalize(std::move(out)));
}

MPoly MPoly::exact_div(const MPoly& d) const {
  if (d.is_zero()) throw std::domain_error("division by the zero polynomial");
  MPoly q, r = *this;
  const Term& ld = d.terms_.front();
  while (!r.is_zero()) {
    const Term& lr = r.terms_.front();
    if (!divides(ld.mono, lr.mono)) throw std::domain_error("inexact polynomial division");
    MPoly t = from_sorted({Term{mono_div(lr.mono, ld.mono), lr.coef / ld.coef}});
    q += t;
    r -= t * d;
  }
  return q;
}

std::string MPoly::to_string(int n) const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const Term& t = terms_[k];
    const bool negative = sgn(t.coef) < 0;
    if (k == 0) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    const Rat mag = abs(t.coef);
    std::string mono;
    for (int s = 0; s < kSlots; ++s) {
      if (t.mono.e[s] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += var_name(VarId::from_slot(s), n);
      if (t.mono.e[s] > 1) mono += "^" + std::to_string(t.mono.e[s]);
    }
    if (mono.empty()) {
      out += sympfact::to_string(mag);
    } else {
      if (mag != 1) out += sympfact::to_string(mag) + "*";
      out += mono;
    }
  }
  return out;
}

MPoly poly_diff(const MPoly& p, VarId v) { return p.diff(v); }

}  // namespace sympfact
