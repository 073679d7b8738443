#include "sympfact/strata.hpp"

#include <stdexcept>

namespace sympfact {

namespace {

void check_dims(int K, int n) {
  if (K < 1 || K > kMaxFactors) throw std::invalid_argument("K outside 1..10");
  if (n < 1 || n > kMaxHalfDim) throw std::invalid_argument("n outside 1..3");
}

Matrix<Rat> random_symmetric(std::size_t n, Rng& rng) {
  Matrix<Rat> m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = rng.small_rational();
  return m;
}

void put_factor(Point& p, int k, const Matrix<Rat>& u) {
  for (std::size_t i = 0; i < u.rows(); ++i)
    for (std::size_t j = i; j < u.cols(); ++j) p.set(VarId::of(k, int(i) + 1, int(j) + 1), u(i, j));
}

// Stacked columns of the upper blocks among factors 1..last.
std::size_t stacked_w_rank(const Point& p, int last, int n) {
  std::vector<int> uppers;
  for (int k = 2; k <= last; k += 2) uppers.push_back(k);
  RatMatrix m(n, n * uppers.size());
  for (std::size_t b = 0; b < uppers.size(); ++b)
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) m(i - 1, b * n + j - 1) = p.at(VarId::of(uppers[b], i, j));
  return exact_rank(m);
}

bool lower_rows_vanish(const Point& p, int last, int n) {
  for (int k = 1; k <= last; k += 2)
    for (int i = 1; i <= n; ++i)
      if (!is_zero(p.at(VarId::of(k, i, n)))) return false;
  return true;
}

std::string case_id(int K, int n, const char* kind, std::size_t s) {
  return "K=" + std::to_string(K) + " n=" + std::to_string(n) + " " + kind + " sample " + std::to_string(s);
}

}  // namespace

std::vector<VarId> level_variables(int K, int n) {
  check_dims(K, n);
  std::vector<VarId> vs;
  for (int i = 1; i <= n; ++i) vs.push_back(VarId::of(1, i, n));
  for (int k = 2; k <= K; ++k)
    for (int i = 1; i <= n; ++i)
      for (int j = i; j <= n; ++j) vs.push_back(VarId::of(k, i, j));
  return vs;
}

std::vector<VarId> all_variables(int K, int n) {
  check_dims(K, n);
  std::vector<VarId> vs;
  for (int k = 1; k <= K; ++k)
    for (int i = 1; i <= n; ++i)
      for (int j = i; j <= n; ++j) vs.push_back(VarId::of(k, i, j));
  return vs;
}

Jacobian jacobian(int K, int n) {
  check_dims(K, n);
  const std::size_t dim = 2 * n;
  Jacobian jac{PolyMatrix(dim, 0), {}};
  // Level 1: the last column of Z_1 is the top half, so J = [I; 0].
  std::vector<MPoly> p(dim, MPoly(0));
  p[dim - 1] = MPoly(1);
  jac.matrix = PolyMatrix(dim, n);
  for (int i = 1; i <= n; ++i) {
    p[i - 1] = MPoly::var(VarId::of(1, i, n));
    jac.matrix(i - 1, i - 1) = MPoly(1);
    jac.columns.push_back(VarId::of(1, i, n));
  }
  for (int k = 2; k <= K; ++k) {
    const bool lower = parity_of_factor(k) == Parity::Lower;
    const std::size_t dst = lower ? 0 : n, src = lower ? n : 0;
    Matrix<MPoly> u(n, n);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) u(i - 1, j - 1) = MPoly::var(VarId::of(k, i, j));

    const std::size_t old_cols = jac.columns.size();
    const std::size_t new_cols = n * (n + 1) / 2;
    PolyMatrix next(dim, old_cols + new_cols);
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < old_cols; ++c) next(r, c) = jac.matrix(r, c);
    for (std::size_t c = 0; c < old_cols; ++c)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (!jac.matrix(src + j, c).is_zero()) next(dst + i, c) += u(i, j) * jac.matrix(src + j, c);

    std::size_t c = old_cols;
    for (int i = 1; i <= n; ++i)
      for (int j = i; j <= n; ++j, ++c) {
        next(dst + j - 1, c) += p[src + i - 1];
        if (i != j) next(dst + i - 1, c) += p[src + j - 1];
        jac.columns.push_back(VarId::of(k, i, j));
      }
    jac.matrix = std::move(next);

    std::vector<MPoly> add(n, MPoly(0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) add[i] += u(i, j) * p[src + j];
    for (int i = 0; i < n; ++i) p[dst + i] += add[i];
  }
  return jac;
}

std::vector<ElemFactor<Rat>> factors_at(const Point& p, int K, int n) {
  check_dims(K, n);
  std::vector<ElemFactor<Rat>> fs;
  for (int k = 1; k <= K; ++k) {
    Matrix<Rat> u(n, n);
    for (int i = 1; i <= n; ++i)
      for (int j = i; j <= n; ++j) {
        const VarId v = VarId::of(k, i, j);
        // Factor 1 only contributes its last row.
        if (k == 1 && j != n && !p.has(v)) continue;
        u(i - 1, j - 1) = u(j - 1, i - 1) = p.at(v);
      }
    fs.push_back(ElemFactor<Rat>{parity_of_factor(k), u});
  }
  return fs;
}

std::vector<Rat> phi(const Point& p, int K, int n) { return last_row_of(factors_at(p, K, n), n); }

bool in_singular_set(const Point& p, int K, int n) {
  if (K < 2) throw std::invalid_argument("S_K needs K >= 2");
  check_dims(K, n);
  return lower_rows_vanish(p, K - 1, n) && stacked_w_rank(p, K - 1, n) < std::size_t(n);
}

bool in_singular_set_all_blocks(const Point& p, int K, int n) {
  if (K < 2) throw std::invalid_argument("S_K needs K >= 2");
  check_dims(K, n);
  return lower_rows_vanish(p, K - 1, n) && stacked_w_rank(p, K, n) < std::size_t(n);
}

Point random_point(int K, int n, Rng& rng) {
  Point p;
  for (const VarId v : all_variables(K, n)) p.set(v, rng.small_rational());
  return p;
}

Point singular_point(int K, int n, Rng& rng, bool rank_one) {
  Point p = random_point(K, n, rng);
  for (int k = 1; k <= K - 1; k += 2)
    for (int i = 1; i <= n; ++i) p.set(VarId::of(k, i, n), 0);
  Matrix<Rat> v(n, rank_one ? 1 : n - 1);
  for (std::size_t r = 0; r < v.rows(); ++r)
    for (std::size_t c = 0; c < v.cols(); ++c) v(r, c) = rng.small_rational();
  const Matrix<Rat> base = v * v.transpose();
  for (int k = 2; k <= K - 1; k += 2) {
    Matrix<Rat> w(n, n);
    if (n > 1) {
      if (rank_one) {
        const Rat s = rng.small_rational();
        w = base.map([&](const Rat& x) { return Rat(s * x); });
      } else {
        w = v * random_symmetric(n - 1, rng) * v.transpose();
      }
    }
    put_factor(p, k, w);
  }
  return p;
}

SubmersivityReport verify_submersivity(int K, int n, std::size_t samples, std::uint64_t seed) {
  if (K < 3) throw std::invalid_argument("submersivity check needs K >= 3");
  SubmersivityReport report{K, n};
  Rng rng = Rng::derived(seed, "submersivity/" + std::to_string(K) + "/" + std::to_string(n));
  const Jacobian jac = jacobian(K, n);
  const std::size_t full = 2 * n;
  auto note_readings = [&](const Point& p, std::size_t rank) {
    if (in_singular_set(p, K, n) == in_singular_set_all_blocks(p, K, n)) return;
    ++report.reading_disagreements;
    if ((rank < full) == in_singular_set(p, K, n)) ++report.literal_reading_confirmed;
  };
  for (std::size_t s = 0; s < samples; ++s) {
    Point p = random_point(K, n, rng);
    while (in_singular_set(p, K, n)) p = random_point(K, n, rng);
    const std::size_t rank = exact_rank(evaluate(jac.matrix, p));
    ++report.off_checked;
    note_readings(p, rank);
    if (rank != full)
      report.failures.push_back(case_id(K, n, "off-S", s) + ": rank " + std::to_string(rank) + ", expected " +
                                std::to_string(full));
  }
  for (std::size_t s = 0; s < samples; ++s) {
    const Point p = singular_point(K, n, rng, n > 1 && s % 2 == 0);
    if (!in_singular_set(p, K, n)) {
      report.failures.push_back(case_id(K, n, "on-S", s) + ": constructed point is not in S_K");
      continue;
    }
    const std::size_t rank = exact_rank(evaluate(jac.matrix, p));
    ++report.on_checked;
    note_readings(p, rank);
    if (rank >= full)
      report.failures.push_back(case_id(K, n, "on-S", s) + ": rank " + std::to_string(rank) + ", expected < " +
                                std::to_string(full));
  }
  return report;
}

const char* to_string(StratumLabel label) {
  switch (label) {
    case StratumLabel::GenericSmooth:
      return "GenericSmooth";
    case StratumLabel::GenericSingular:
      return "GenericSingular";
    case StratumLabel::NonGenericSmooth:
      return "NonGenericSmooth";
    case StratumLabel::NonGenericSingular:
      return "NonGenericSingular";
  }
  return "?";
}

StratumLabel parse_stratum(const std::string& name) {
  for (auto l : {StratumLabel::GenericSmooth, StratumLabel::GenericSingular, StratumLabel::NonGenericSmooth,
                 StratumLabel::NonGenericSingular})
    if (name == to_string(l)) return l;
  throw std::invalid_argument("unknown stratum: " + name);
}

Stratum classify_fiber(int K, const std::vector<Rat>& a) {
  if (K < 3) throw std::invalid_argument("fiber classification needs K >= 3");
  if (a.size() != 4) throw std::invalid_argument("fiber classification needs a 4-vector");
  const bool top_zero = is_zero(a[0]) && is_zero(a[1]);
  const bool bot_zero = is_zero(a[2]) && is_zero(a[3]);
  if (top_zero && bot_zero) throw std::invalid_argument("the zero row is not in the image");
  const bool bot_singular = is_zero(a[2]) && a[3] == 1;
  const bool odd = K % 2 == 1;
  if (odd) {
    if (bot_zero) return {StratumLabel::NonGenericSmooth, true};
    return {bot_singular ? StratumLabel::GenericSingular : StratumLabel::GenericSmooth, true};
  }
  if (!top_zero) return {StratumLabel::GenericSmooth, false};
  return {bot_singular ? StratumLabel::NonGenericSingular : StratumLabel::NonGenericSmooth, false};
}

std::vector<Rat> random_target(int K, StratumLabel label, Rng& rng) {
  const bool odd = K % 2 == 1;
  auto nonzero_pair = [&]() {
    for (;;) {
      Rat x = rng.small_rational(), y = rng.small_rational();
      if (!is_zero(x) || !is_zero(y)) return std::pair<Rat, Rat>{x, y};
    }
  };
  // (a3, a4) outside {(0,0), (0,1)}.
  auto smooth_bottom = [&]() {
    for (;;) {
      auto [x, y] = nonzero_pair();
      if (!(is_zero(x) && y == 1)) return std::pair<Rat, Rat>{x, y};
    }
  };
  switch (label) {
    case StratumLabel::GenericSmooth: {
      if (odd) {
        auto [c, d] = smooth_bottom();
        return {rng.small_rational(), rng.small_rational(), c, d};
      }
      auto [a, b] = nonzero_pair();
      return {a, b, rng.small_rational(), rng.small_rational()};
    }
    case StratumLabel::GenericSingular:
      if (!odd) throw std::invalid_argument("even levels have no singular generic fibers");
      return {rng.small_rational(), rng.small_rational(), 0, 1};
    case StratumLabel::NonGenericSmooth: {
      if (odd) {
        auto [a, b] = nonzero_pair();
        return {a, b, 0, 0};
      }
      auto [c, d] = smooth_bottom();
      return {0, 0, c, d};
    }
    case StratumLabel::NonGenericSingular:
      if (odd) throw std::invalid_argument("odd levels have no singular non-generic fibers");
      return {0, 0, 0, 1};
  }
  throw std::logic_error("unreachable stratum");
}

FiberPoint sample_on_fiber(int K, const std::vector<Rat>& a, Rng& rng) {
  if (K < 3) throw std::invalid_argument("fiber sampling needs K >= 3");
  if (a.size() % 2 != 0 || a.empty()) throw std::invalid_argument("target must have even length");
  const int n = int(a.size() / 2);
  check_dims(K, n);
  bool nonzero = false;
  for (const auto& x : a) nonzero = nonzero || !is_zero(x);
  if (!nonzero) throw std::invalid_argument("the zero row is not in the image");

  // Factors 4..K are random; the first three are solved so that
  // e^T X h = a, i.e. the last row of X is x = a^T h^{-1}.
  Point p;
  std::vector<ElemFactor<Rat>> inv;
  for (int k = 4; k <= K; ++k) {
    const Matrix<Rat> u = random_symmetric(n, rng);
    put_factor(p, k, u);
    inv.insert(inv.begin(), inverse(ElemFactor<Rat>{parity_of_factor(k), u}));
  }
  const Matrix<Rat> h_inv = free_product(inv, n);
  std::vector<Rat> x(2 * n, Rat(0));
  for (int c = 0; c < 2 * n; ++c)
    for (int r = 0; r < 2 * n; ++r) x[c] += a[r] * h_inv(r, c);

  const std::vector<Rat> top(x.begin(), x.begin() + n), bot(x.begin() + n, x.end());
  Matrix<Rat> z2;
  std::vector<Rat> zhat;
  for (;;) {
    z2 = random_symmetric(n, rng);
    zhat = top;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) zhat[i] -= z2(i, j) * bot[j];
    if (!is_zero(detail::norm2(zhat))) break;
  }
  Matrix<Rat> z1 = random_symmetric(n, rng);
  for (int j = 0; j < n; ++j) z1(n - 1, j) = z1(j, n - 1) = zhat[j];
  std::vector<Rat> rhs = bot;
  rhs[n - 1] -= 1;
  Matrix<Rat> w1 = solve_symmetric(zhat, rhs);
  if (n > 1) {
    // Add U T U^T with the columns of U orthogonal (bilinearly) to zhat.
    int piv = 0;
    for (int i = 1; i < n; ++i)
      if (magnitude(zhat[piv]) < magnitude(zhat[i])) piv = i;
    Matrix<Rat> basis(n, n - 1);
    for (int j = 0, col = 0; j < n; ++j) {
      if (j == piv) continue;
      basis(j, col) = 1;
      basis(piv, col) = -zhat[j] / zhat[piv];
      ++col;
    }
    w1 = w1 + basis * random_symmetric(n - 1, rng) * basis.transpose();
  }
  put_factor(p, 1, z1);
  put_factor(p, 2, w1);
  put_factor(p, 3, z2);

  FiberPoint fp{p, K, n, phi(p, K, n)};
  if (fp.target != a) throw std::logic_error("fiber sampler missed its target");
  return fp;
}

FiberPoint sample_fiber_point(int K, int n, const SampleMode& mode, Rng& rng) {
  switch (mode.kind) {
    case SampleMode::Kind::Random: {
      Point p = random_point(K, n, rng);
      return FiberPoint{p, K, n, phi(p, K, n)};
    }
    case SampleMode::Kind::OnStratum:
      if (n != 2) throw std::invalid_argument("stratum-targeted sampling needs n = 2");
      if (K < 3) throw std::invalid_argument("stratum-targeted sampling needs K >= 3");
      return sample_on_fiber(K, random_target(K, mode.stratum, rng), rng);
    case SampleMode::Kind::OnComponent: {
      if (K != 3 || n != 2) throw std::invalid_argument("components A1/A2 are defined for K = 3, n = 2");
      Point p = random_point(K, n, rng);
      if (mode.component == Component::A1) {
        p.set(VarId::z(2), 0);
        p.set(VarId::z(3), 0);
      } else {
        // W = t u u^T has rank <= 1 and annihilates (z2, z3) = s (-u2, u1).
        Rat u1, u2;
        do {
          u1 = rng.small_rational();
          u2 = rng.small_rational();
        } while (is_zero(u1) && is_zero(u2));
        const Rat t = rng.nonzero_rational(), s = rng.nonzero_rational();
        p.set(VarId::w(1), t * u1 * u1);
        p.set(VarId::w(2), t * u1 * u2);
        p.set(VarId::w(3), t * u2 * u2);
        p.set(VarId::z(2), -s * u2);
        p.set(VarId::z(3), s * u1);
      }
      return FiberPoint{p, K, n, phi(p, K, n)};
    }
  }
  throw std::logic_error("unreachable sample mode");
}

}  // namespace sympfact
