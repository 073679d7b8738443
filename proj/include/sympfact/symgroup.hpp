#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sympfact/matrix.hpp"
#include "sympfact/mpoly.hpp"
#include "sympfact/scalar.hpp"

namespace sympfact {

enum class Parity { Lower, Upper };

inline Parity opposite(Parity p) { return p == Parity::Lower ? Parity::Upper : Parity::Lower; }
inline const char* to_string(Parity p) { return p == Parity::Lower ? "lower" : "upper"; }
// Factor k (1-based) of the alternating product; factor 1 is lower.
inline Parity parity_of_factor(int k) { return k % 2 == 1 ? Parity::Lower : Parity::Upper; }

inline bool near_zero(const Rat& x, double) { return is_zero(x); }
inline bool near_zero(const MPoly& x, double) { return x.is_zero(); }
inline bool near_zero(const Complex& x, double tol) { return std::abs(x) <= tol; }

// Lower embeds as [[I,0],[U,I]], upper as [[I,U],[0,I]]; U symmetric n x n.
template <class T>
struct ElemFactor {
  Parity parity = Parity::Lower;
  Matrix<T> params;

  std::size_t n() const { return params.rows(); }
};

template <class T>
bool is_symmetric(const Matrix<T>& u, double tol = 0) {
  if (!u.square()) return false;
  for (std::size_t r = 0; r < u.rows(); ++r)
    for (std::size_t c = r + 1; c < u.cols(); ++c)
      if (!near_zero(u(r, c) - u(c, r), tol)) return false;
  return true;
}

template <class T>
Matrix<T> elem_matrix(const ElemFactor<T>& f, double tol = 0) {
  if (!is_symmetric(f.params, tol)) throw std::invalid_argument("elementary factor parameters are not symmetric");
  const std::size_t n = f.n();
  Matrix<T> m = Matrix<T>::identity(2 * n);
  if (f.parity == Parity::Lower)
    m.set_block(n, 0, f.params);
  else
    m.set_block(0, n, f.params);
  return m;
}

template <class T>
ElemFactor<T> inverse(const ElemFactor<T>& f) {
  return ElemFactor<T>{f.parity, f.params.map([](const T& x) { return T(T(0) - x); })};
}

// Product of factors in list order, any parity pattern.
template <class T>
Matrix<T> free_product(const std::vector<ElemFactor<T>>& factors, std::size_t n, double tol = 0) {
  Matrix<T> m = Matrix<T>::identity(2 * n);
  for (const auto& f : factors) {
    if (f.n() != n) throw std::invalid_argument("elementary factor of inconsistent size");
    m = m * elem_matrix(f, tol);
  }
  return m;
}

// Alternating product M_1 ... M_K; the parity pattern must alternate from `first`.
template <class T>
Matrix<T> psi_product(const std::vector<ElemFactor<T>>& factors, std::size_t n, Parity first = Parity::Lower) {
  Parity expect = first;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    if (factors[k].parity != expect)
      throw std::invalid_argument("factor " + std::to_string(k + 1) + " breaks the alternating parity pattern");
    expect = opposite(expect);
  }
  return free_product(factors, n);
}

// Transposed last row of a factor list, built factor by factor from e_2n.
template <class T>
std::vector<T> last_row_of(const std::vector<ElemFactor<T>>& factors, std::size_t n) {
  std::vector<T> p(2 * n, T(0));
  p[2 * n - 1] = T(1);
  for (const auto& f : factors) {
    const std::size_t src = f.parity == Parity::Lower ? n : 0;
    const std::size_t dst = f.parity == Parity::Lower ? 0 : n;
    std::vector<T> add(n, T(0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!is_zero(f.params(i, j)) && !is_zero(p[src + j])) add[i] = add[i] + f.params(i, j) * p[src + j];
    for (std::size_t i = 0; i < n; ++i) p[dst + i] = p[dst + i] + add[i];
  }
  return p;
}

// Name of the first violated block identity, or nullopt for a symplectic matrix.
template <class T>
std::optional<std::string> symplectic_violation(const Matrix<T>& m, double tol = 0) {
  if (!m.square() || m.rows() % 2 != 0) throw std::invalid_argument("symplectic test needs a square matrix of even size");
  const std::size_t n = m.rows() / 2;
  const Matrix<T> a = m.block(0, 0, n, n), b = m.block(0, n, n, n);
  const Matrix<T> c = m.block(n, 0, n, n), d = m.block(n, n, n, n);
  auto zero = [&](const Matrix<T>& x) {
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t s = 0; s < n; ++s)
        if (!near_zero(x(r, s), tol)) return false;
    return true;
  };
  if (!zero(a.transpose() * c - c.transpose() * a)) return std::string("A^T C = C^T A");
  if (!zero(b.transpose() * d - d.transpose() * b)) return std::string("B^T D = D^T B");
  if (!zero(a.transpose() * d - c.transpose() * b - Matrix<T>::identity(n))) return std::string("A^T D - C^T B = I");
  return std::nullopt;
}

template <class T>
bool is_symplectic(const Matrix<T>& m, double tol = 0) {
  return !symplectic_violation(m, tol).has_value();
}

// Factors of the four-term Whitehead-type identity for Sp_4; their product is
// whitehead_lhs(a) = [[1,0,0,0],[a,1,0,0],[0,0,1,-a],[0,0,0,1]].
template <class T>
std::array<ElemFactor<T>, 4> whitehead_factors(const T& a) {
  const T zero(0), one(1);
  const T minus_a = T(zero - a);
  return {ElemFactor<T>{Parity::Lower, Matrix<T>{{a, T(zero - one)}, {T(zero - one), zero}}},
          ElemFactor<T>{Parity::Upper, Matrix<T>{{zero, zero}, {zero, a}}},
          ElemFactor<T>{Parity::Lower, Matrix<T>{{zero, one}, {one, zero}}},
          ElemFactor<T>{Parity::Upper, Matrix<T>{{zero, zero}, {zero, minus_a}}}};
}

template <class T>
Matrix<T> whitehead_lhs(const T& a) {
  Matrix<T> m = Matrix<T>::identity(4);
  m(1, 0) = a;
  m(2, 3) = T(T(0) - a);
  return m;
}

// Standard inclusion SL_2 -> Sp_4 acting on coordinates 1 and 3.
template <class T>
Matrix<T> psi_embed(const Matrix<T>& m, double tol = 0) {
  if (m.rows() != 2 || m.cols() != 2) throw std::invalid_argument("psi_embed expects a 2x2 matrix");
  if (!near_zero(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) - T(1), tol))
    throw std::invalid_argument("psi_embed input is not unimodular");
  Matrix<T> e = Matrix<T>::identity(4);
  e(0, 0) = m(0, 0);
  e(0, 2) = m(0, 1);
  e(2, 0) = m(1, 0);
  e(2, 2) = m(1, 1);
  return e;
}

// psi of the SL_2 transvection [[1,0],[u,1]] (lower) or [[1,u],[0,1]] (upper).
template <class T>
ElemFactor<T> lift_transvection(Parity p, const T& u) {
  Matrix<T> params(2, 2);
  params(0, 0) = u;
  return ElemFactor<T>{p, params};
}

using LastRow = std::vector<MPoly>;

// Factors 1..K with symbolic parameters VarId(k, i, j).
std::vector<ElemFactor<MPoly>> symbolic_factors(int K, int n);

// P^K via the two-step recursion; throws for K < 1.
LastRow last_row(int K, int n);

}  // namespace sympfact
