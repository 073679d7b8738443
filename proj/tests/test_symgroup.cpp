#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

#include <random>

#include "sympfact/linalg.hpp"
#include "sympfact/matrix_json.hpp"
#include "sympfact/symgroup.hpp"

using namespace sympfact;

namespace {

MPoly P(const char* s) { return MPoly::parse(s); }

Complex random_complex(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  return {u(rng), u(rng)};
}

ElemFactor<Complex> random_factor(std::mt19937_64& rng, Parity p) {
  Matrix<Complex> u(2, 2);
  u(0, 0) = random_complex(rng);
  u(1, 1) = random_complex(rng);
  u(0, 1) = u(1, 0) = random_complex(rng);
  return {p, u};
}

double max_abs(const Matrix<Complex>& m) {
  double x = 0;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) x = std::max(x, std::abs(m(r, c)));
  return x;
}

using Dense = std::array<std::array<Rat, 4>, 4>;

Dense dense_mul(const Dense& a, const Dense& b) {
  Dense c{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

// Hand-written 4x4 elementary matrix for n = 2.
Dense dense_elem(bool lower, const Rat& u11, const Rat& u12, const Rat& u22) {
  Dense m{};
  for (int i = 0; i < 4; ++i) m[i][i] = 1;
  const int r = lower ? 2 : 0, c = lower ? 0 : 2;
  m[r][c] = u11;
  m[r][c + 1] = u12;
  m[r + 1][c] = u12;
  m[r + 1][c + 1] = u22;
  return m;
}

}  // namespace

TEST_CASE("elem_matrix") {
  ElemFactor<MPoly> zero{Parity::Lower, Matrix<MPoly>(2, 2)};
  CHECK(elem_matrix(zero) == Matrix<MPoly>::identity(4));

  ElemFactor<MPoly> z{Parity::Lower, {{P("z1"), P("z2")}, {P("z2"), P("z3")}}};
  const Matrix<MPoly> expect{{1L, 0L, 0L, 0L}, {0L, 1L, 0L, 0L}, {P("z1"), P("z2"), 1L, 0L}, {P("z2"), P("z3"), 0L, 1L}};
  CHECK(elem_matrix(z) == expect);
  CHECK(is_symplectic(elem_matrix(z)));

  ElemFactor<MPoly> u{Parity::Upper, {{P("a")}}};
  CHECK(elem_matrix(u) == Matrix<MPoly>{{1L, P("a")}, {0L, 1L}});

  ElemFactor<MPoly> bad{Parity::Upper, {{P("z1"), P("z2")}, {P("z3"), P("z1")}}};
  CHECK_THROWS_AS(elem_matrix(bad), std::invalid_argument);
}

TEST_CASE("is_symplectic") {
  CHECK(is_symplectic(Matrix<Rat>::identity(4)));
  Matrix<Rat> d = Matrix<Rat>::identity(4);
  d(0, 0) = 2;
  CHECK_FALSE(is_symplectic(d));
  CHECK(symplectic_violation(d).value() == "A^T D - C^T B = I");
  CHECK_THROWS(is_symplectic(Matrix<Rat>::identity(3)));

  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<ElemFactor<Complex>> fs;
    for (int k = 1; k <= 6; ++k) fs.push_back(random_factor(rng, parity_of_factor(k)));
    CHECK(is_symplectic(psi_product(fs, 2), 1e-12));
  }
  for (int K = 1; K <= 4; ++K)
    for (int n = 1; n <= 2; ++n) CHECK(is_symplectic(psi_product(symbolic_factors(K, n), n)));
}

TEST_CASE("psi_product") {
  CHECK(psi_product(std::vector<ElemFactor<MPoly>>{}, 2) == Matrix<MPoly>::identity(4));
  const auto m2 = psi_product(symbolic_factors(2, 2), 2);
  CHECK(m2(3, 2) == P("z2w1 + z3w2"));
  CHECK(m2(3, 3) == P("1 + z2w2 + z3w3"));

  auto fs = symbolic_factors(3, 2);
  std::swap(fs[0], fs[1]);
  CHECK_THROWS_AS(psi_product(fs, 2), std::invalid_argument);
  CHECK_THROWS_AS(psi_product(fs, 2, Parity::Upper), std::invalid_argument);
  fs.pop_back();
  CHECK_NOTHROW(psi_product(fs, 2, Parity::Upper));
  CHECK_THROWS(psi_product(fs, 2, Parity::Lower));

  // K = 3 at a rational point against hand-built dense matrices.
  const Rat v[9] = {make_rat(1, 2), 2, -3, make_rat(-7, 3), 1, 4, 5, make_rat(2, 3), -1};
  Point pt;
  for (int k = 0; k < 9; ++k) pt.set(VarId::from_slot((k / 3) * 6 + (k % 3 == 0 ? 0 : k % 3 == 1 ? 1 : 3)), v[k]);
  const RatMatrix got = evaluate(psi_product(symbolic_factors(3, 2), 2), pt);
  Dense oracle = dense_mul(dense_mul(dense_elem(true, v[0], v[1], v[2]), dense_elem(false, v[3], v[4], v[5])),
                           dense_elem(true, v[6], v[7], v[8]));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(got(i, j) == oracle[i][j]);
}

TEST_CASE("last_row") {
  CHECK_THROWS(last_row(0, 2));
  const LastRow p1 = last_row(1, 2);
  CHECK(p1 == LastRow{P("z2"), P("z3"), 0L, 1L});
  const LastRow p2 = last_row(2, 2);
  CHECK(p2 == LastRow{P("z2"), P("z3"), P("z2w1+z3w2"), P("1+z2w2+z3w3")});
  for (int n = 1; n <= 3; ++n)
    for (int K = 1; K <= (n == 3 ? 5 : 6); ++K) {
      const auto m = psi_product(symbolic_factors(K, n), n);
      const LastRow p = last_row(K, n);
      for (int c = 0; c < 2 * n; ++c) CHECK(p[c] == m(2 * n - 1, c));
      Point zero;
      for (int k = 1; k <= K; ++k)
        for (int i = 1; i <= n; ++i)
          for (int j = i; j <= n; ++j) zero.set(VarId::of(k, i, j), 0);
      CHECK(p.back().evaluate(zero) == 1);
    }
}

TEST_CASE("last_row at K=6, n=3 matches the symbolic product" * doctest::timeout(120)) {
  const auto m = psi_product(symbolic_factors(6, 3), 3);
  const LastRow p = last_row(6, 3);
  for (int c = 0; c < 6; ++c) CHECK(p[c] == m(5, c));
}

TEST_CASE("Table 3 derivative example") {
  const LastRow p4 = last_row(4, 2);
  Point on_c;
  for (int m : {2, 3, 5, 6}) on_c.set(VarId::z(m), 0);
  CHECK(p4[0].diff(VarId::z(2)).substitute(on_c) == P("1 + w1z4"));
}

TEST_CASE("elementary inverses") {
  for (const auto& f : symbolic_factors(4, 2)) {
    CHECK(elem_matrix(f) * elem_matrix(inverse(f)) == Matrix<MPoly>::identity(4));
  }
}

TEST_CASE("Whitehead identity") {
  const MPoly a = MPoly::var(VarId::aux(0));
  const auto fs = whitehead_factors(a);
  const auto prod = psi_product(std::vector<ElemFactor<MPoly>>(fs.begin(), fs.end()), 2);
  CHECK((prod - whitehead_lhs(a)).is_zero_matrix());

  const auto f0 = whitehead_factors(MPoly(0));
  CHECK(psi_product(std::vector<ElemFactor<MPoly>>(f0.begin(), f0.end()), 2) == Matrix<MPoly>::identity(4));

  const auto f1 = whitehead_factors(Complex(1));
  const auto p1 = psi_product(std::vector<ElemFactor<Complex>>(f1.begin(), f1.end()), 2);
  CHECK(p1(1, 0) == Complex(1));
  CHECK(p1(2, 3) == Complex(-1));

  // The same factor shapes with the opposite sign of a produce the reflected matrix.
  std::vector<ElemFactor<MPoly>> displayed{
      {Parity::Lower, {{-a, -1L}, {-1L, 0L}}},
      {Parity::Upper, {{0L, 0L}, {0L, -a}}},
      {Parity::Lower, {{0L, 1L}, {1L, 0L}}},
      {Parity::Upper, {{0L, 0L}, {0L, a}}}};
  CHECK((psi_product(displayed, 2) - whitehead_lhs(-a)).is_zero_matrix());
}

TEST_CASE("psi_embed") {
  CHECK(psi_embed(Matrix<Rat>::identity(2)) == Matrix<Rat>::identity(4));
  const Matrix<Rat> m{{2, 3}, {1, 2}};
  const auto e = psi_embed(m);
  CHECK(e(0, 0) == 2);
  CHECK(e(0, 2) == 3);
  CHECK(e(2, 0) == 1);
  CHECK(e(2, 2) == 2);
  CHECK(e(1, 1) == 1);
  CHECK(e(3, 3) == 1);
  CHECK(is_symplectic(e));
  CHECK_THROWS(psi_embed(Matrix<Rat>{{2, 0}, {0, 1}}));
  CHECK_NOTHROW(psi_embed(Matrix<Complex>{{2.0, 0.0}, {0.0, 0.5 + 1e-13}}, 1e-12));

  const MPoly u = MPoly::var(VarId::aux(1));
  CHECK(psi_embed(Matrix<MPoly>{{1L, 0L}, {u, 1L}}) == elem_matrix(lift_transvection(Parity::Lower, u)));
  CHECK(psi_embed(Matrix<MPoly>{{1L, u}, {0L, 1L}}) == elem_matrix(lift_transvection(Parity::Upper, u)));
}

TEST_CASE("matrix JSON round trip") {
  std::mt19937_64 rng(4);
  Matrix<Complex> m(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) = random_complex(rng);
  const auto back = complex_matrix_from_json(complex_matrix_to_json(m));
  CHECK(max_abs(back - m) == 0.0);

  Matrix<Rat> q = Matrix<Rat>::identity(4);
  q(0, 1) = make_rat(-3, 7);
  CHECK(rat_matrix_from_json(rat_matrix_to_json(q)) == q);

  using nlohmann::json;
  json exact = {{"n", 1}, {"entries", json::array({json::array({"1/2", "0"}), json::array({"0", "2"})})}};
  CHECK(complex_matrix_from_json(exact)(0, 0) == Complex(0.5));
  CHECK_THROWS(complex_matrix_from_json(nlohmann::json{{"n", 2}, {"entries", {{"1"}}}}));
  CHECK_THROWS(complex_matrix_from_json(nlohmann::json{{"entries", nlohmann::json::array()}}));
}
