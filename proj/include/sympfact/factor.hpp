#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "sympfact/random.hpp"
#include "sympfact/symgroup.hpp"

namespace sympfact {

using CMatrix = Matrix<Complex>;
using CFactor = ElemFactor<Complex>;

double frobenius(const CMatrix& m);
// ||a - b||_F / ||b||_F.
double relative_residual(const CMatrix& a, const CMatrix& b);

// Names the pipeline stage that rejected the input.
class FactorizationError : public std::runtime_error {
 public:
  FactorizationError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct Transvection {
  Parity parity;  // lower [[1,0],[u,1]], upper [[1,u],[0,1]]
  Complex u;
};

CMatrix transvection_matrix(const Transvection& t);

// At most four transvections with product m; three when an off-diagonal pivot
// is usable, four through a lower pre-transvection on diagonal input.
std::vector<Transvection> factor_sl2(const CMatrix& m, double tol = 1e-9);

struct StageDiagnostic {
  std::string stage;
  double value;  // structural error or conditioning ratio of that stage
};

struct FactorizationResult {
  std::vector<CFactor> factors;  // application order: A = M_1 M_2 ... M_count
  double residual = 0;
  std::size_t count = 0;
  std::vector<StageDiagnostic> diagnostics;
};

// Adjacent same-parity factors are added; exactly zero factors are dropped.
std::vector<CFactor> merge_factors(std::vector<CFactor> factors);

// Pointwise factorization of A in Sp_4(C); throws FactorizationError.
FactorizationResult factor_sp4(const CMatrix& A, double tol = 1e-9);

inline constexpr std::size_t kMaxFactorCount = 16;

// G_i = M_i - I; (G_i)^2 = 0 so exp(G_i) = I + G_i.
template <class T>
std::vector<Matrix<T>> exp_factorization(const std::vector<ElemFactor<T>>& factors) {
  std::vector<Matrix<T>> logs;
  for (const auto& f : factors) logs.push_back(elem_matrix(f) - Matrix<T>::identity(2 * f.n()));
  return logs;
}

// Product of I + G_i in order.
template <class T>
Matrix<T> exp_product(const std::vector<Matrix<T>>& logs, std::size_t dim) {
  Matrix<T> m = Matrix<T>::identity(dim);
  for (const auto& g : logs) m = m * (Matrix<T>::identity(dim) + g);
  return m;
}

// Alternating product starting with a lower factor; real and imaginary parts
// of every parameter uniform in [-1, 1].
std::vector<CFactor> random_factors(std::size_t count, Rng& rng);

}  // namespace sympfact
