#pragma once

#include <doctest.h>

#include "sympfact/mpoly.hpp"

namespace doctest {
template <>
struct StringMaker<sympfact::MPoly> {
  static String convert(const sympfact::MPoly& p) { return p.to_string().c_str(); }
};
}  // namespace doctest
