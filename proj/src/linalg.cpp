#include "sympfact/linalg.hpp"

namespace sympfact {

std::size_t exact_rank(RatMatrix m) {
  std::size_t rank = 0;
  for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
    std::size_t p = rank;
    while (p < m.rows() && is_zero(m(p, c))) ++p;
    if (p == m.rows()) continue;
    if (p != rank)
      for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(p, k), m(rank, k));
    const Rat inv = 1 / m(rank, c);
    for (std::size_t r = rank + 1; r < m.rows(); ++r) {
      if (is_zero(m(r, c))) continue;
      const Rat f = m(r, c) * inv;
      for (std::size_t k = c; k < m.cols(); ++k) m(r, k) -= f * m(rank, k);
    }
    ++rank;
  }
  return rank;
}

Rat rat_det(const RatMatrix& m) {
  return det_bareiss(m, [](const Rat& a, const Rat& b) { return Rat(a / b); });
}

MPoly poly_det(const PolyMatrix& m) {
  if (!m.square()) throw std::invalid_argument("determinant of a non-square matrix");
  if (m.rows() <= 3) return det_cofactor(m);
  return det_bareiss(m, [](const MPoly& a, const MPoly& b) { return a.exact_div(b); });
}

RatMatrix evaluate(const PolyMatrix& m, const Point& p) {
  return m.map([&](const MPoly& x) { return x.evaluate(p); });
}

}  // namespace sympfact
