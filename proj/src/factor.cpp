#include "sympfact/factor.hpp"

#include <algorithm>
#include <cmath>

#include "sympfact/strata.hpp"

namespace sympfact {

namespace {

CMatrix symplectic_inverse(const CMatrix& m) {
  const std::size_t n = m.rows() / 2;
  const CMatrix a = m.block(0, 0, n, n), b = m.block(0, n, n, n);
  const CMatrix c = m.block(n, 0, n, n), d = m.block(n, n, n, n);
  CMatrix inv(2 * n, 2 * n);
  inv.set_block(0, 0, d.transpose());
  inv.set_block(0, n, b.transpose().map([](const Complex& x) { return -x; }));
  inv.set_block(n, 0, c.transpose().map([](const Complex& x) { return -x; }));
  inv.set_block(n, n, a.transpose());
  return inv;
}

CFactor upper_factor(const CMatrix& u) { return CFactor{Parity::Upper, u}; }

bool all_zero(const CMatrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (m(r, c) != Complex(0)) return false;
  return true;
}

// A single elementary factor (or the identity) when A has that shape exactly up to tol.
std::optional<std::vector<CFactor>> trivial_factorization(const CMatrix& A, double tol) {
  const double scale = std::max(1.0, frobenius(A));
  auto near = [&](const CMatrix& x, const CMatrix& y) { return frobenius(x - y) <= tol * scale; };
  const CMatrix I2 = CMatrix::identity(2), Z2(2, 2);
  if (!near(A.block(0, 0, 2, 2), I2) || !near(A.block(2, 2, 2, 2), I2)) return std::nullopt;
  const CMatrix b = A.block(0, 2, 2, 2), c = A.block(2, 0, 2, 2);
  const bool b_zero = near(b, Z2), c_zero = near(c, Z2);
  if (b_zero && c_zero) return std::vector<CFactor>{};
  if (b_zero) return std::vector<CFactor>{CFactor{Parity::Lower, c}};
  if (c_zero) return std::vector<CFactor>{CFactor{Parity::Upper, b}};
  return std::nullopt;
}

}  // namespace

double frobenius(const CMatrix& m) {
  double s = 0;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) s += std::norm(m(r, c));
  return std::sqrt(s);
}

double relative_residual(const CMatrix& a, const CMatrix& b) {
  const double den = frobenius(b);
  return frobenius(a - b) / (den == 0 ? 1 : den);
}

CMatrix transvection_matrix(const Transvection& t) {
  CMatrix m = CMatrix::identity(2);
  if (t.parity == Parity::Lower)
    m(1, 0) = t.u;
  else
    m(0, 1) = t.u;
  return m;
}

std::vector<Transvection> factor_sl2(const CMatrix& m, double tol) {
  if (m.rows() != 2 || m.cols() != 2) throw std::invalid_argument("factor_sl2 expects a 2x2 matrix");
  const Complex a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  if (std::abs(a * d - b * c - Complex(1)) > tol) throw std::invalid_argument("factor_sl2 input is not unimodular");
  const double pivot_floor = 1e-8 * std::max(1.0, frobenius(m));
  std::vector<Transvection> out;
  auto push = [&](Parity p, Complex u) {
    if (!out.empty() && out.back().parity == p)
      out.back().u += u;
    else
      out.push_back({p, u});
    if (out.back().u == Complex(0)) out.pop_back();
  };
  if (std::max(std::abs(b), std::abs(c)) < pivot_floor) {
    // m = L(-1) (L(1) m), and L(1) m has the usable pivot a.
    push(Parity::Lower, -1.0);
    const CMatrix shifted = transvection_matrix({Parity::Lower, 1.0}) * m;
    for (const auto& t : factor_sl2(shifted, tol)) push(t.parity, t.u);
    return out;
  }
  if (std::abs(c) >= std::abs(b)) {
    push(Parity::Upper, (a - 1.0) / c);
    push(Parity::Lower, c);
    push(Parity::Upper, (d - 1.0) / c);
  } else {
    push(Parity::Lower, (d - 1.0) / b);
    push(Parity::Upper, b);
    push(Parity::Lower, (a - 1.0) / b);
  }
  return out;
}

std::vector<CFactor> merge_factors(std::vector<CFactor> factors) {
  std::vector<CFactor> out;
  for (auto& f : factors) {
    if (!out.empty() && out.back().parity == f.parity)
      out.back().params = out.back().params + f.params;
    else
      out.push_back(std::move(f));
    if (all_zero(out.back().params)) out.pop_back();
  }
  return out;
}

FactorizationResult factor_sp4(const CMatrix& A, double tol) {
  if (A.rows() != 4 || A.cols() != 4) throw FactorizationError("input", "expected a 4x4 matrix");
  const double scale = std::max(1.0, frobenius(A));
  if (auto v = symplectic_violation(A, tol * scale * scale)) throw FactorizationError("input", "not symplectic: " + *v + " fails");

  FactorizationResult res;
  if (auto trivial = trivial_factorization(A, tol)) {
    res.factors = std::move(*trivial);
  } else {
    // Stage 1: three factors E with the last row of A.
    std::vector<Complex> a(4);
    for (int k = 0; k < 4; ++k) a[k] = A(3, k);
    const auto pre = preimage_last_row(a, 2);
    const std::vector<Complex> zhat{pre[0].params(1, 0), pre[0].params(1, 1)};
    const double ratio = std::sqrt(detail::norm2(zhat) / detail::norm2(a));
    res.diagnostics.push_back({"last-row preimage", ratio});
    if (ratio < 1e-6) throw FactorizationError("last-row preimage", "ill-conditioned shifted top half");
    const std::vector<CFactor> E(pre.begin(), pre.end());

    // Stage 2: C = E A^{-1} has last row e4 and the forced column-2 entries.
    const CMatrix C = free_product(E, 2) * symplectic_inverse(A);
    const double cscale = std::max(1.0, frobenius(C));
    double err = std::max({std::abs(C(3, 0)), std::abs(C(3, 1)), std::abs(C(3, 2)), std::abs(C(3, 3) - 1.0),
                           std::abs(C(0, 1)), std::abs(C(2, 1)), std::abs(C(1, 1) - 1.0)}) / cscale;
    res.diagnostics.push_back({"normalization", err});
    if (err > tol) throw FactorizationError("normalization", "E A^-1 lacks the forced last-row structure");

    // Stage 3-4: the SL_2 block on coordinates {1, 3} and its inverse.
    CMatrix f(2, 2);
    f(0, 0) = C(0, 0);
    f(0, 1) = C(0, 2);
    f(1, 0) = C(2, 0);
    f(1, 1) = C(2, 2);
    const CMatrix f_inv{{f(1, 1), -f(0, 1)}, {-f(1, 0), f(0, 0)}};
    std::vector<CFactor> lifted;
    try {
      for (const auto& t : factor_sl2(f_inv, tol * cscale * cscale)) lifted.push_back(lift_transvection(t.parity, t.u));
    } catch (const std::invalid_argument& e) {
      throw FactorizationError("sl2", e.what());
    }

    // Stage 5: R = C psi(f^-1) is the Whitehead block times one upper factor.
    const CMatrix R = C * free_product(lifted, 2);
    const Complex alpha = -R(2, 3);
    const CMatrix V{{0.0, R(0, 3)}, {R(0, 3), R(1, 3) + R(2, 3) * R(0, 3)}};
    const auto wh = whitehead_factors(alpha);
    std::vector<CFactor> r_factors(wh.begin(), wh.end());
    r_factors.push_back(upper_factor(V));
    err = relative_residual(free_product(r_factors, 2), R);
    res.diagnostics.push_back({"residual split", err});
    if (err > tol) throw FactorizationError("residual split", "C psi(f^-1) is not of Whitehead-times-upper form");

    // Stage 6: A = psi(f^-1) R^{-1} E.
    std::vector<CFactor> all = lifted;
    for (auto it = r_factors.rbegin(); it != r_factors.rend(); ++it) all.push_back(inverse(*it));
    all.insert(all.end(), E.begin(), E.end());
    res.factors = merge_factors(std::move(all));
  }
  res.count = res.factors.size();
  res.residual = relative_residual(free_product(res.factors, 2), A);
  res.diagnostics.push_back({"assembly", res.residual});
  if (res.residual > tol) throw FactorizationError("assembly", "re-multiplied product misses the input");
  return res;
}

std::vector<CFactor> random_factors(std::size_t count, Rng& rng) {
  std::vector<CFactor> out;
  for (std::size_t k = 0; k < count; ++k) {
    CMatrix u(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j)
        u(i, j) = u(j, i) = Complex(rng.uniform_real(-1, 1), rng.uniform_real(-1, 1));
    out.push_back(CFactor{parity_of_factor(int(k) + 1), u});
  }
  return out;
}

}  // namespace sympfact
