#pragma once

#include <complex>

#include "sympfact/rational.hpp"

namespace sympfact {

using Complex = std::complex<double>;

inline bool is_zero(const Complex& x) { return x == 0.0; }

}  // namespace sympfact
