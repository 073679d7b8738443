#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>

#include "sympfact/matrix.hpp"
#include "sympfact/mpoly.hpp"
#include "sympfact/rational.hpp"

namespace sympfact {

using PolyMatrix = Matrix<MPoly>;
using RatMatrix = Matrix<Rat>;

// Rank over Q by exact Gaussian elimination.
std::size_t exact_rank(RatMatrix m);

Rat rat_det(const RatMatrix& m);

// Cofactor expansion up to 3x3, fraction-free elimination beyond.
MPoly poly_det(const PolyMatrix& m);

RatMatrix evaluate(const PolyMatrix& m, const Point& p);

template <class T>
T det_cofactor(const Matrix<T>& m) {
  if (!m.square()) throw std::invalid_argument("determinant of a non-square matrix");
  switch (m.rows()) {
    case 0:
      return T(1);
    case 1:
      return m(0, 0);
    case 2:
      return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    case 3:
      return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
             m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
             m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    default:
      throw std::invalid_argument("cofactor expansion limited to 3x3");
  }
}

// Bareiss elimination; `div(a, b)` must return the exact quotient a / b.
template <class T, class Div>
T det_bareiss(Matrix<T> m, Div&& div) {
  if (!m.square()) throw std::invalid_argument("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return T(1);
  bool negate = false;
  T prev(1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (is_zero(m(k, k))) {
      std::size_t r = k + 1;
      while (r < n && is_zero(m(r, k))) ++r;
      if (r == n) return T(0);
      for (std::size_t c = 0; c < n; ++c) std::swap(m(k, c), m(r, c));
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) = div(m(k, k) * m(i, j) - m(i, k) * m(k, j), prev);
      m(i, k) = T(0);
    }
    prev = m(k, k);
  }
  T d = m(n - 1, n - 1);
  return negate ? T(0) - d : d;
}

}  // namespace sympfact
