#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace sympfact {

// Canonical rational: denominator positive, numerator and denominator coprime.
using Rat = mpq_class;

// Accepts "p", "-p", "p/q"; throws std::invalid_argument on malformed text or q = 0.
Rat parse_rat(std::string_view text);

std::string to_string(const Rat& r);

// num/den reduced to canonical form; den must be nonzero.
Rat make_rat(long num, long den);

inline bool is_zero(const Rat& r) { return sgn(r) == 0; }

}  // namespace sympfact
