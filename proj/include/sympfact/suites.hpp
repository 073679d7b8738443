#pragma once

#include <cstdint>
#include <vector>

#include "sympfact/report.hpp"

namespace sympfact {

// Symbolic product of the four Whitehead factors against the closed form.
Report whitehead_suite();
// last_row(K, n) against the last row of the full symbolic product:
// K <= min(kmax, 5) for n <= 2 and K <= min(kmax, 4) for n = 3.
Report last_row_suite(int kmax);
// Jacobian rank off and on S_K for the given levels and n = 1..3.
Report submersivity_suite(const std::vector<int>& levels, std::size_t samples, std::uint64_t seed);
// preimage_last_row round trips on rational (exact) and complex (1e-12) targets.
Report preimage_suite(std::size_t samples, std::uint64_t seed);
// factor_sp4 and exp_factorization round trips on random 8-factor products.
Report factor_suite(std::size_t samples, std::uint64_t seed, double tol);

// Table cells where the transcription differs from the recomputed value and
// the recomputed value has been confirmed independently.
bool is_known_table_erratum(const Failure& f);

}  // namespace sympfact
