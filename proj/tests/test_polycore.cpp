#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "support.hpp"
#include "sympfact/linalg.hpp"
#include "sympfact/mpoly.hpp"

using namespace sympfact;

namespace {

MPoly P(const char* s) { return MPoly::parse(s); }

MPoly random_poly(std::mt19937_64& rng, int terms) {
  const VarId vars[] = {VarId::z(2), VarId::z(3), VarId::w(1), VarId::w(2), VarId::w(3), VarId::z(4)};
  MPoly p;
  for (int t = 0; t < terms; ++t) {
    MPoly m(make_rat(long(rng() % 13) - 6, long(rng() % 3) + 1));
    for (int k = 0; k < 3; ++k)
      if (rng() % 2) m *= MPoly::var(vars[rng() % 6]);
    p += m;
  }
  return p;
}

RatMatrix random_rat_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, bool sparse) {
  RatMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (!sparse || rng() % 3 == 0) m(i, j) = make_rat(long(rng() % 7) - 3, long(rng() % 2) + 1);
  return m;
}

// Leibniz permutation sum.
MPoly permutation_det(const PolyMatrix& m) {
  std::vector<int> perm(m.rows());
  std::iota(perm.begin(), perm.end(), 0);
  MPoly total;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
      for (std::size_t j = i + 1; j < perm.size(); ++j) inversions += perm[i] > perm[j];
    MPoly term(inversions % 2 ? -1L : 1L);
    for (std::size_t i = 0; i < perm.size(); ++i) term *= m(i, perm[i]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

}  // namespace

TEST_CASE("variable naming follows the flat n=2 convention") {
  CHECK(VarId::z(1) == VarId::of(1, 1, 1));
  CHECK(VarId::z(3) == VarId::of(1, 2, 2));
  CHECK(VarId::w(2) == VarId::of(2, 1, 2));
  CHECK(VarId::z(4) == VarId::of(3, 1, 1));
  CHECK(VarId::w(6) == VarId::of(4, 2, 2));
  CHECK(var_name(VarId::of(5, 2, 1)) == "z8");
  CHECK(var_name(VarId::of(3, 1, 3), 3) == "z2_13");
  CHECK(parse_var("z2_13", 3) == VarId::of(3, 1, 3));
  CHECK(parse_var("w5") == VarId::w(5));
  CHECK(VarId::z(3) < VarId::w(1));
  CHECK(VarId::w(3) < VarId::z(4));
  for (int s = 0; s < kSlots; ++s) CHECK(VarId::from_slot(s).slot() == s);
  CHECK_THROWS(VarId::of(11, 1, 1));
  CHECK_THROWS(VarId::of(1, 1, 4));
}

TEST_CASE("rationals are canonical") {
  CHECK(to_string(parse_rat("6/4")) == "3/2");
  CHECK(to_string(parse_rat("-2/1")) == "-2");
  CHECK_THROWS(parse_rat("1/0"));
  CHECK_THROWS(parse_rat("1/-2"));
  CHECK_THROWS(parse_rat("x"));
}

TEST_CASE("poly_mul examples") {
  CHECK(poly_mul(P("z2"), P("w1")).to_string() == "z2*w1");
  CHECK(poly_mul(P("z2w1+z3w2"), MPoly()).is_zero());
  CHECK(poly_mul(P("z2w1+z3w2"), MPoly(1)) == P("z2*w1 + z3*w2"));
  CHECK((P("z2 + 1") * P("z2 - 1")).to_string() == "z2^2 - 1");
}

TEST_CASE("poly_diff examples") {
  CHECK(poly_diff(P("z2w1+z3w2"), VarId::w(1)) == P("z2"));
  CHECK(poly_diff(P("1+z2w2+z3w3"), VarId::z(4)).is_zero());
  CHECK(poly_diff(P("3z2^3w1"), VarId::z(2)).to_string() == "9*z2^2*w1");
}

TEST_CASE("rendering is canonical and parse inverts it") {
  CHECK(P("1 + z2w2 + z3w3").to_string() == "z2*w2 + z3*w3 + 1");
  CHECK(P("w1w3-w2^2").to_string() == "w1*w3 - w2^2");
  CHECK(P("-(z2 - 1/2)").to_string() == "-z2 + 1/2");
  CHECK(P("0").to_string() == "0");
  std::mt19937_64 rng(7);
  for (int k = 0; k < 50; ++k) {
    const MPoly p = random_poly(rng, 6);
    CHECK(MPoly::parse(p.to_string()) == p);
  }
  CHECK_THROWS(P("z2 +"));
  CHECK_THROWS(P("q7"));
}

TEST_CASE("ring axioms and Leibniz rule at random instances") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 60; ++k) {
    const MPoly a = random_poly(rng, 5), b = random_poly(rng, 5), c = random_poly(rng, 5);
    CHECK((a + b) * c == a * c + b * c);
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a - a == MPoly());
    const VarId v = VarId::w(1);
    CHECK((a * b).diff(v) == a * b.diff(v) + b * a.diff(v));
  }
}

TEST_CASE("evaluation, substitution and exact division") {
  const MPoly p = P("z2w1 + z3w2 - 1/2");
  Point pt;
  pt.set(VarId::z(2), 2);
  pt.set(VarId::z(3), make_rat(1, 3));
  pt.set(VarId::w(1), 5);
  pt.set(VarId::w(2), 3);
  CHECK(p.evaluate(pt) == make_rat(21, 2));
  Point partial;
  partial.set(VarId::z(2), 0);
  CHECK(p.substitute(partial) == P("z3w2 - 1/2"));
  Point missing;
  CHECK_THROWS_AS(p.evaluate(missing), std::out_of_range);

  std::mt19937_64 rng(5);
  for (int k = 0; k < 30; ++k) {
    const MPoly a = random_poly(rng, 4), b = random_poly(rng, 3);
    if (b.is_zero()) continue;
    CHECK((a * b).exact_div(b) == a);
  }
  CHECK_THROWS_AS(P("z2 + 1").exact_div(P("z3")), std::domain_error);
}

TEST_CASE("poly_det examples") {
  PolyMatrix i3 = PolyMatrix::identity(3);
  CHECK(poly_det(i3) == MPoly(1));
  CHECK(poly_det(PolyMatrix{{P("w1"), P("w2")}, {P("w2"), P("w3")}}) == P("w1w3 - w2^2"));
  CHECK_THROWS(poly_det(PolyMatrix(2, 3)));

  // Gradient rows of (P1, P2, P4) at level 2 restricted to (z2, w2, w3); P3 row removed.
  const MPoly p[4] = {P("z2"), P("z3"), P("z2w1 + z3w2"), P("1 + z2w2 + z3w3")};
  const VarId t[3] = {VarId::z(2), VarId::w(2), VarId::w(3)};
  PolyMatrix m(3, 3);
  const int rows[3] = {0, 2, 3};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = p[rows[r]].diff(t[c]);
  CHECK(poly_det(m) == P("z3^2"));
}

TEST_CASE("determinants agree with the permutation-sum oracle and alternate") {
  std::mt19937_64 rng(3);
  for (int size = 2; size <= 4; ++size) {
    for (int k = 0; k < 6; ++k) {
      PolyMatrix m(size, size);
      for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) m(r, c) = random_poly(rng, 2);
      const MPoly d = poly_det(m);
      CHECK(d == permutation_det(m));
      PolyMatrix s = m;
      for (int c = 0; c < size; ++c) std::swap(s(0, c), s(1, c));
      CHECK(poly_det(s) == -d);
    }
  }
}

TEST_CASE("exact rank") {
  CHECK(exact_rank(RatMatrix::identity(4)) == 4);
  RatMatrix prop{{1, 2, 3}, {2, 4, 6}};
  CHECK(exact_rank(prop) == 1);
  CHECK(exact_rank(RatMatrix(3, 5)) == 0);
  std::mt19937_64 rng(9);
  for (int k = 0; k < 100; ++k) {
    const RatMatrix m = random_rat_matrix(rng, 2 + rng() % 4, 2 + rng() % 5, true);
    CHECK(exact_rank(m) == exact_rank(m.transpose()));
  }
  for (int k = 0; k < 20; ++k) {
    const RatMatrix a = random_rat_matrix(rng, 4, 4, false);
    CHECK((exact_rank(a) == 4) == !is_zero(rat_det(a)));
  }
}
