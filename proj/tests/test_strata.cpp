#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

#include <random>

#include "sympfact/strata.hpp"

using namespace sympfact;

namespace {

MPoly P(const char* s) { return MPoly::parse(s); }

Point zero_point(int K, int n) {
  Point p;
  for (VarId v : all_variables(K, n)) p.set(v, 0);
  return p;
}

std::vector<Complex> random_complex_vector(std::mt19937_64& rng, std::size_t size) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Complex> v(size);
  for (auto& x : v) x = Complex(u(rng), u(rng));
  return v;
}

double rel_error(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double num = 0, den = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    num += std::norm(a[k] - b[k]);
    den += std::norm(b[k]);
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("jacobian at level 1 is [I; 0]") {
  const Jacobian j = jacobian(1, 2);
  CHECK(j.matrix == PolyMatrix{{1L, 0L}, {0L, 1L}, {0L, 0L}, {0L, 0L}});
  CHECK(j.columns == std::vector<VarId>{VarId::z(2), VarId::z(3)});
}

TEST_CASE("new-variable block of an odd step") {
  const Jacobian j = jacobian(3, 2);
  const LastRow p2 = last_row(2, 2);
  REQUIRE(j.columns.size() == 8);
  const PolyMatrix block = j.matrix.block(0, 5, 4, 3);
  CHECK(block == PolyMatrix{{p2[2], p2[3], 0L}, {0L, p2[2], p2[3]}, {0L, 0L, 0L}, {0L, 0L, 0L}});
}

TEST_CASE("jacobian matches direct differentiation of the last row") {
  for (int n = 1; n <= 3; ++n)
    for (int K = 1; K <= 5; ++K) {
      const Jacobian j = jacobian(K, n);
      const LastRow p = last_row(K, n);
      CHECK(j.columns == level_variables(K, n));
      for (std::size_t c = 0; c < j.columns.size(); ++c)
        for (int r = 0; r < 2 * n; ++r) CHECK(j.matrix(r, c) == p[r].diff(j.columns[c]));
      // Parameters outside level_variables never enter.
      for (VarId v : all_variables(K, n)) {
        bool used = false;
        for (VarId u : j.columns) used = used || u == v;
        if (!used)
          for (int r = 0; r < 2 * n; ++r) CHECK(p[r].diff(v).is_zero());
      }
    }
}

TEST_CASE("rank of JP^3 at a fixed rational point") {
  Point pt;
  for (int m = 1; m <= 3; ++m) pt.set(VarId::z(m), 1);
  pt.set(VarId::w(1), 1);
  pt.set(VarId::w(2), 0);
  pt.set(VarId::w(3), 0);
  for (int m = 4; m <= 6; ++m) pt.set(VarId::z(m), 0);
  // Oracle: dense Jacobian of P^3 over every parameter.
  const LastRow p = last_row(3, 2);
  const auto vars = all_variables(3, 2);
  RatMatrix dense(4, vars.size());
  for (int r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < vars.size(); ++c) dense(r, c) = p[r].diff(vars[c]).evaluate(pt);
  CHECK(exact_rank(evaluate(jacobian(3, 2).matrix, pt)) == exact_rank(dense));
  CHECK(exact_rank(dense) == 4);
}

TEST_CASE("singular set membership") {
  CHECK(in_singular_set(zero_point(3, 2), 3, 2));
  Point p = zero_point(3, 2);
  p.set(VarId::z(2), 1);
  CHECK_FALSE(in_singular_set(p, 3, 2));
  CHECK_THROWS(in_singular_set(p, 1, 2));

  // z-rows zero, W2 = 2 W1 with rank-one W1.
  Point q = zero_point(4, 2);
  q.set(VarId::z(1), 5);
  q.set(VarId::w(1), 1);
  q.set(VarId::w(2), 2);
  q.set(VarId::w(3), 4);
  q.set(VarId::w(4), 2);
  q.set(VarId::w(5), 4);
  q.set(VarId::w(6), 8);
  q.set(VarId::z(4), 3);
  CHECK(in_singular_set(q, 4, 2));
  q.set(VarId::w(6), 9);
  CHECK(in_singular_set(q, 4, 2));
  q.set(VarId::w(3), 5);
  CHECK_FALSE(in_singular_set(q, 4, 2));
}

TEST_CASE("submersivity dichotomy on small batches") {
  for (int n = 1; n <= 3; ++n)
    for (int K = 3; K <= 4; ++K) {
      const auto rep = verify_submersivity(K, n, 20, 42);
      CHECK(rep.failures.empty());
      CHECK(rep.off_checked == 20);
      CHECK(rep.on_checked == 20);
      CHECK(rep.literal_reading_confirmed == rep.reading_disagreements);
    }
  // K even: the K-th block is unconstrained, so the two readings disagree on constructed points.
  CHECK(verify_submersivity(4, 2, 10, 1).reading_disagreements > 0);
}

TEST_CASE("direct rank checks at special points") {
  Point p = zero_point(3, 1);
  p.set(VarId::of(2, 1, 1), 0);
  p.set(VarId::of(3, 1, 1), 7);
  CHECK(exact_rank(evaluate(jacobian(3, 1).matrix, p)) < 2);

  for (int K = 1; K <= 5; ++K)
    for (int n = 1; n <= 3; ++n) {
      const Point z = zero_point(K, n);
      const auto a = phi(z, K, n);
      std::vector<Rat> e(2 * n, Rat(0));
      e.back() = 1;
      CHECK(a == e);
      const RatMatrix j = evaluate(jacobian(K, n).matrix, z);
      CHECK(j.block(n, 0, n, j.cols()).is_zero_matrix());
    }
}

TEST_CASE("solve_symmetric") {
  const std::vector<Rat> d{3, -2};
  const auto m = solve_symmetric(std::vector<Rat>{1, 0}, d);
  CHECK(m == Matrix<Rat>{{3, -2}, {-2, 0}});
  CHECK(solve_symmetric(std::vector<Rat>{0, 1}, std::vector<Rat>{5, 7}) == Matrix<Rat>{{0, 5}, {5, 7}});
  const std::vector<Complex> c{1.0, Complex(0, 1)}, dc{2.0, Complex(1, -1)};
  const auto mc = solve_symmetric(c, dc);
  CHECK(is_symmetric(mc));
  for (int i = 0; i < 2; ++i) CHECK(std::abs(mc(i, 0) * c[0] + mc(i, 1) * c[1] - dc[i]) < 1e-15);
  CHECK_THROWS(solve_symmetric(std::vector<Rat>{0, 0}, d));

  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 3;
    std::vector<Rat> cc(n), dd(n);
    for (auto& x : cc) x = rng.small_rational();
    for (auto& x : dd) x = rng.small_rational();
    if (is_zero(detail::norm2(cc))) continue;
    const auto s = solve_symmetric(cc, dd);
    CHECK(is_symmetric(s));
    for (std::size_t i = 0; i < n; ++i) {
      Rat acc = 0;
      for (std::size_t j = 0; j < n; ++j) acc += s(i, j) * cc[j];
      CHECK(acc == dd[i]);
    }
  }
}

TEST_CASE("preimage_last_row examples") {
  const std::vector<Rat> e4{0, 0, 0, 1};
  const auto f = preimage_last_row(e4, 2);
  CHECK(f[2].params == Matrix<Rat>{{0, 0}, {0, 1}});
  CHECK(last_row_of(std::vector<ElemFactor<Rat>>(f.begin(), f.end()), 2) == e4);
  CHECK(psi_product(std::vector<ElemFactor<Rat>>(f.begin(), f.end()), 2).row(3) == e4);

  const std::vector<Rat> a{1, 1, 0, 0};
  const auto g = preimage_last_row(a, 2);
  CHECK(g[2].params.is_zero_matrix());
  CHECK(g[0].params(1, 0) == 1);
  CHECK(g[0].params(1, 1) == 1);
  CHECK(g[1].params(0, 0) + g[1].params(0, 1) == 0);
  CHECK(g[1].params(1, 0) + g[1].params(1, 1) == -1);
  CHECK(psi_product(std::vector<ElemFactor<Rat>>(g.begin(), g.end()), 2).row(3) == a);
  CHECK_THROWS(preimage_last_row(std::vector<Rat>{0, 0, 0, 0}, 2));
}

TEST_CASE("preimage_last_row reproduces random targets") {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 3;
    std::vector<Rat> a(2 * n);
    for (auto& x : a) x = rng.small_rational();
    if (trial % 5 == 0)
      for (int i = 0; i < n; ++i) a[i] = 0;
    if (is_zero(detail::norm2(a))) a.back() = 1;
    const auto f = preimage_last_row(a, n);
    std::vector<ElemFactor<Rat>> fs(f.begin(), f.end());
    CHECK(psi_product(fs, n).row(2 * n - 1) == a);
    Point p;
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) p.set(VarId::of(k + 1, i + 1, j + 1), fs[k].params(i, j));
    CHECK_FALSE(in_singular_set(p, 3, n));
  }
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_complex_vector(gen, 4);
    if (trial % 4 == 0) a[0] = a[1] = 0.0;
    const auto f = preimage_last_row(a, 2);
    const auto m = psi_product(std::vector<ElemFactor<Complex>>(f.begin(), f.end()), 2);
    CHECK(rel_error(m.row(3), a) <= 1e-12);
  }
}

TEST_CASE("classify_fiber") {
  CHECK(classify_fiber(3, {0, 0, 0, 1}) == Stratum{StratumLabel::GenericSingular, true});
  CHECK(classify_fiber(4, {1, 0, 0, 1}) == Stratum{StratumLabel::GenericSmooth, false});
  CHECK(classify_fiber(4, {0, 0, 0, 1}) == Stratum{StratumLabel::NonGenericSingular, false});
  CHECK(classify_fiber(5, {1, 2, 0, 0}).label == StratumLabel::NonGenericSmooth);
  CHECK(classify_fiber(6, {0, 0, 2, 1}).label == StratumLabel::NonGenericSmooth);
  CHECK(classify_fiber(3, {0, 0, 3, 1}).label == StratumLabel::GenericSmooth);
  CHECK_THROWS(classify_fiber(3, {0, 0, 0, 0}));
  CHECK_THROWS(classify_fiber(2, {0, 0, 0, 1}));
}

TEST_CASE("sample_fiber_point modes") {
  Rng rng(5);
  const auto r = sample_fiber_point(3, 2, {SampleMode::Kind::Random}, rng);
  CHECK(phi(r.point, 3, 2) == r.target);
  CHECK(last_row(3, 2)[0].evaluate(r.point) == r.target[0]);

  for (int t = 0; t < 10; ++t) {
    const auto a1 = sample_fiber_point(3, 2, {SampleMode::Kind::OnComponent, {}, Component::A1}, rng);
    CHECK(a1.point.at(VarId::z(2)) == 0);
    CHECK(a1.point.at(VarId::z(3)) == 0);
    CHECK(a1.target == std::vector<Rat>{a1.point.at(VarId::z(5)), a1.point.at(VarId::z(6)), 0, 1});

    const auto a2 = sample_fiber_point(3, 2, {SampleMode::Kind::OnComponent, {}, Component::A2}, rng);
    const Point& p = a2.point;
    CHECK(p.at(VarId::w(1)) * p.at(VarId::z(2)) + p.at(VarId::w(2)) * p.at(VarId::z(3)) == 0);
    CHECK(p.at(VarId::w(2)) * p.at(VarId::z(2)) + p.at(VarId::w(3)) * p.at(VarId::z(3)) == 0);
    CHECK(p.at(VarId::w(1)) * p.at(VarId::w(3)) - p.at(VarId::w(2)) * p.at(VarId::w(2)) == 0);
    CHECK(a2.target[2] == 0);
    CHECK(a2.target[3] == 1);
  }

  for (int K = 3; K <= 6; ++K)
    for (auto label : {StratumLabel::GenericSmooth, StratumLabel::GenericSingular, StratumLabel::NonGenericSmooth,
                       StratumLabel::NonGenericSingular}) {
      const bool possible = K % 2 == 1 ? label != StratumLabel::NonGenericSingular
                                       : label != StratumLabel::GenericSingular;
      SampleMode mode{SampleMode::Kind::OnStratum, label};
      if (!possible) {
        CHECK_THROWS_AS(sample_fiber_point(K, 2, mode, rng), std::invalid_argument);
        continue;
      }
      for (int t = 0; t < 5; ++t) {
        const auto fp = sample_fiber_point(K, 2, mode, rng);
        CHECK(classify_fiber(K, fp.target).label == label);
        CHECK(phi(fp.point, K, 2) == fp.target);
      }
    }
  CHECK_THROWS(sample_fiber_point(4, 2, {SampleMode::Kind::OnComponent}, rng));
  CHECK_THROWS(sample_fiber_point(3, 3, {SampleMode::Kind::OnStratum}, rng));
}

TEST_CASE("sample_on_fiber for general n") {
  Rng rng(6);
  for (int n = 1; n <= 3; ++n)
    for (int K = 3; K <= 6; ++K) {
      std::vector<Rat> a(2 * n);
      for (auto& x : a) x = rng.small_rational();
      a.back() += 20;
      const auto fp = sample_on_fiber(K, a, rng);
      CHECK(phi(fp.point, K, n) == a);
    }
}

TEST_CASE("non-generic odd fibers reduce to the previous level") {
  Rng rng(9);
  for (int K : {5, 7}) {
    for (int t = 0; t < 10; ++t) {
      const Rat a1 = rng.nonzero_rational(), a2 = rng.small_rational();
      const std::vector<Rat> a{a1, a2, 0, 0};
      CHECK(classify_fiber(K, a).label == StratumLabel::NonGenericSmooth);
      // On the level K-1 fiber, and a random point that is not.
      const Point on = sample_on_fiber(K - 1, a, rng).point;
      const Point off = random_point(K - 1, 2, rng);
      for (const Point* base : {&on, &off}) {
        Point p = *base;
        for (int i = 1; i <= 2; ++i)
          for (int j = i; j <= 2; ++j) p.set(VarId::of(K, i, j), rng.small_rational());
        CHECK((phi(p, K, 2) == a) == (phi(*base, K - 1, 2) == a));
      }
      CHECK(phi(on, K - 1, 2) == a);
    }
  }
}
