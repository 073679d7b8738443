#include "sympfact/symgroup.hpp"

namespace sympfact {

std::vector<ElemFactor<MPoly>> symbolic_factors(int K, int n) {
  if (n < 1 || n > kMaxHalfDim) throw std::out_of_range("n outside 1..3");
  std::vector<ElemFactor<MPoly>> fs;
  for (int k = 1; k <= K; ++k) {
    Matrix<MPoly> u(n, n);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) u(i - 1, j - 1) = MPoly::var(VarId::of(k, i, j));
    fs.push_back(ElemFactor<MPoly>{parity_of_factor(k), u});
  }
  return fs;
}

LastRow last_row(int K, int n) {
  if (K < 1) throw std::invalid_argument("last_row needs K >= 1");
  return last_row_of(symbolic_factors(K, n), n);
}

}  // namespace sympfact
