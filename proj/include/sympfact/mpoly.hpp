#pragma once

#include <array>
#include <bitset>
#include <compare>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <vector>

#include "sympfact/rational.hpp"
#include "sympfact/varid.hpp"

namespace sympfact {

struct Monomial {
  std::array<std::uint8_t, kSlots> e{};

  unsigned degree() const;
  int exponent(VarId v) const { return e[v.slot()]; }

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return std::memcmp(a.e.data(), b.e.data(), kSlots) == 0;
  }
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    const int c = std::memcmp(a.e.data(), b.e.data(), kSlots);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
};

// Rational assignment to a subset of the variables.
class Point {
 public:
  void set(VarId v, const Rat& value);
  bool has(VarId v) const { return defined_[v.slot()]; }
  // Throws std::out_of_range for an unassigned variable.
  const Rat& at(VarId v) const;
  std::vector<VarId> variables() const;

 private:
  std::array<Rat, kSlots> values_;
  std::bitset<kSlots> defined_;
};

// Sparse polynomial with terms kept in strictly descending lexicographic order
// of exponent vectors and no zero coefficients.
class MPoly {
 public:
  struct Term {
    Monomial mono;
    Rat coef;
  };

  MPoly() = default;
  MPoly(long c);
  MPoly(const Rat& c);

  static MPoly var(VarId v);
  static MPoly z(int m) { return var(VarId::z(m)); }
  static MPoly w(int m) { return var(VarId::w(m)); }

  // Text form: sums of signed terms, factors joined by '*' or juxtaposed,
  // names as in var_name, powers with '^', rational coefficients "p/q".
  static MPoly parse(std::string_view text, int n = 2);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rat constant_term() const;

  MPoly& operator+=(const MPoly& o);
  MPoly& operator-=(const MPoly& o);
  MPoly& operator*=(const MPoly& o);
  MPoly operator-() const;
  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
  friend MPoly operator*(const MPoly& a, const MPoly& b);
  friend bool operator==(const MPoly& a, const MPoly& b);

  MPoly scaled(const Rat& c) const;
  MPoly diff(VarId v) const;
  // Part of the polynomial with exponent exactly `power` in v, with v removed.
  MPoly coefficient(VarId v, int power) const;
  int degree_in(VarId v) const;
  unsigned total_degree() const;
  std::vector<VarId> variables() const;

  Rat evaluate(const Point& p) const;
  // Evaluates into any commutative ring S constructible from a Rat via `lift`.
  template <class S, class ValueOf, class Lift>
  S evaluate_with(ValueOf&& value_of, Lift&& lift) const;
  // Replaces every variable assigned in p by its value.
  MPoly substitute(const Point& p) const;
  // Exact quotient; throws std::domain_error if d does not divide *this.
  MPoly exact_div(const MPoly& d) const;

  std::string to_string(int n = 2) const;

 private:
  static MPoly from_sorted(std::vector<Term> terms);
  friend MPoly poly_mul(const MPoly& a, const MPoly& b);
  std::vector<Term> terms_;
};

inline bool is_zero(const MPoly& p) { return p.is_zero(); }

MPoly poly_mul(const MPoly& a, const MPoly& b);
MPoly poly_diff(const MPoly& p, VarId v);

template <class S, class ValueOf, class Lift>
S MPoly::evaluate_with(ValueOf&& value_of, Lift&& lift) const {
  S total = lift(Rat(0));
  for (const auto& t : terms_) {
    S term = lift(t.coef);
    for (int s = 0; s < kSlots; ++s) {
      for (int k = 0; k < t.mono.e[s]; ++k) term = term * value_of(VarId::from_slot(s));
    }
    total = total + term;
  }
  return total;
}

}  // namespace sympfact
