#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sympfact/linalg.hpp"
#include "sympfact/random.hpp"
#include "sympfact/symgroup.hpp"

namespace sympfact {

// Variables that enter P^K: the last row of factor 1, then every entry of
// factors 2..K, in variable order.
std::vector<VarId> level_variables(int K, int n);
// Every parameter of factors 1..K, including the unused part of factor 1.
std::vector<VarId> all_variables(int K, int n);

struct Jacobian {
  PolyMatrix matrix;             // 2n x columns.size()
  std::vector<VarId> columns;    // level_variables(K, n)
};

// Block recursion, one factor at a time; the new columns of a lower step
// involve the bottom half of the previous last row and vice versa.
Jacobian jacobian(int K, int n);

// Elementary factors of the alternating product at a rational point.
std::vector<ElemFactor<Rat>> factors_at(const Point& p, int K, int n);
// Phi_K(p), the transposed last row of the product.
std::vector<Rat> phi(const Point& p, int K, int n);

// S_K read literally: last-row entries of every lower factor among the first
// K-1 vanish and the stacked columns of every upper block among the first K-1
// factors have rank < n.
bool in_singular_set(const Point& p, int K, int n);
// Alternative reading that also includes the K-th factor when it is upper.
bool in_singular_set_all_blocks(const Point& p, int K, int n);

struct SubmersivityReport {
  int K = 0;
  int n = 0;
  std::size_t off_checked = 0;
  std::size_t on_checked = 0;
  // Points where the two readings of S_K disagree; the rank decides which holds.
  std::size_t reading_disagreements = 0;
  std::size_t literal_reading_confirmed = 0;
  std::vector<std::string> failures;
};

SubmersivityReport verify_submersivity(int K, int n, std::size_t samples, std::uint64_t seed);

Point random_point(int K, int n, Rng& rng);
// Point of S_K: every W block among the first K-1 factors is V S_k V^T with V
// of size n x (n-1) (shared column space), or a scalar multiple of one rank-one
// block when `rank_one` is set and n >= 2.
Point singular_point(int K, int n, Rng& rng, bool rank_one);

inline Rat magnitude(const Rat& x) { return abs(x); }
inline double magnitude(const Complex& x) { return std::abs(x); }

// Symmetric M with M c = d; pivot p = argmax |c_p| (first on ties).
template <class T>
Matrix<T> solve_symmetric(const std::vector<T>& c, const std::vector<T>& d) {
  const std::size_t n = c.size();
  if (d.size() != n || n == 0) throw std::invalid_argument("solve_symmetric size mismatch");
  std::size_t p = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (magnitude(c[p]) < magnitude(c[i])) p = i;
  if (is_zero(c[p])) throw std::invalid_argument("solve_symmetric needs c != 0");
  Matrix<T> m(n, n);
  T rest = d[p];
  for (std::size_t i = 0; i < n; ++i) {
    if (i == p) continue;
    m(i, p) = m(p, i) = T(d[i] / c[p]);
    rest = T(rest - m(p, i) * c[i]);
  }
  m(p, p) = T(rest / c[p]);
  return m;
}

namespace detail {

inline Rat norm2(const std::vector<Rat>& v) {
  Rat s(0);
  for (const auto& x : v) s += x * x;
  return s;
}

inline double norm2(const std::vector<Complex>& v) {
  double s = 0;
  for (const auto& x : v) s += std::norm(x);
  return s;
}

inline bool exact_scalar(const Rat&) { return true; }
inline bool exact_scalar(const Complex&) { return false; }

}  // namespace detail

// Three factors (Z1 lower, W1 upper, Z2 lower) outside S_3 whose product has
// last row a. Z2 = 0 unless the top half of a is (numerically) zero; then Z2
// is the unit symmetric matrix maximizing |a_top - Z2 a_bot|.
template <class T>
std::array<ElemFactor<T>, 3> preimage_last_row(const std::vector<T>& a, std::size_t n) {
  if (a.size() != 2 * n) throw std::invalid_argument("target must have 2n entries");
  const std::vector<T> top(a.begin(), a.begin() + n), bot(a.begin() + n, a.end());
  bool all_zero = true;
  for (const auto& x : a) all_zero = all_zero && is_zero(x);
  if (all_zero) throw std::invalid_argument("the zero row is not in the image");

  Matrix<T> z2(n, n);
  const bool top_ok = detail::exact_scalar(a[0]) ? !(detail::norm2(top) == 0)
                                                 : !(detail::norm2(top) < 1e-12 * detail::norm2(a));
  auto shifted = [&](const Matrix<T>& z) {
    std::vector<T> r = top;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r[i] = T(r[i] - z(i, j) * bot[j]);
    return r;
  };
  if (!top_ok) {
    std::vector<Matrix<T>> candidates;
    for (std::size_t i = 0; i < n; ++i) {
      Matrix<T> e(n, n);
      e(i, i) = T(1);
      candidates.push_back(e);
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        Matrix<T> e(n, n);
        e(i, j) = e(j, i) = T(1);
        candidates.push_back(e);
      }
    auto best = detail::norm2(shifted(candidates[0]));
    z2 = candidates[0];
    for (std::size_t k = 1; k < candidates.size(); ++k) {
      const auto v = detail::norm2(shifted(candidates[k]));
      if (best < v) {
        best = v;
        z2 = candidates[k];
      }
    }
  }
  const std::vector<T> zhat = shifted(z2);
  Matrix<T> z1(n, n);
  for (std::size_t j = 0; j < n; ++j) z1(n - 1, j) = z1(j, n - 1) = zhat[j];
  std::vector<T> rhs = bot;
  rhs[n - 1] = T(rhs[n - 1] - T(1));
  return {ElemFactor<T>{Parity::Lower, z1}, ElemFactor<T>{Parity::Upper, solve_symmetric(zhat, rhs)},
          ElemFactor<T>{Parity::Lower, z2}};
}

enum class StratumLabel { GenericSmooth, GenericSingular, NonGenericSmooth, NonGenericSingular };

struct Stratum {
  StratumLabel label;
  bool odd;  // parity of K

  friend bool operator==(const Stratum&, const Stratum&) = default;
};

const char* to_string(StratumLabel label);
StratumLabel parse_stratum(const std::string& name);

// n = 2; throws for a = 0 or K < 3.
Stratum classify_fiber(int K, const std::vector<Rat>& a);

struct FiberPoint {
  Point point;
  int K = 0;
  int n = 0;
  std::vector<Rat> target;
};

enum class Component { A1, A2 };

struct SampleMode {
  enum class Kind { Random, OnStratum, OnComponent } kind = Kind::Random;
  StratumLabel stratum = StratumLabel::GenericSmooth;
  Component component = Component::A1;
};

// Point on the fiber over a (a != 0, K >= 3): random factors 4..K and a
// randomized three-factor last-row preimage in front of them.
FiberPoint sample_on_fiber(int K, const std::vector<Rat>& a, Rng& rng);

// Throws std::invalid_argument for requests that cannot be satisfied.
FiberPoint sample_fiber_point(int K, int n, const SampleMode& mode, Rng& rng);

// Random target of the given stratum (n = 2).
std::vector<Rat> random_target(int K, StratumLabel label, Rng& rng);

}  // namespace sympfact
