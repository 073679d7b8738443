#include "sympfact/varid.hpp"

#include <array>
#include <cctype>
#include <stdexcept>
#include <utility>

namespace sympfact {

namespace {

constexpr std::array<std::pair<int, int>, 6> kTri{{{1, 1}, {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3}}};
constexpr std::array<std::pair<int, int>, 3> kFlat{{{1, 1}, {1, 2}, {2, 2}}};
constexpr char kAuxNames[kAuxSlots] = {'a', 'b', 'c', 'd'};

int tri_index(int i, int j) {
  for (int k = 0; k < 6; ++k)
    if (kTri[k].first == i && kTri[k].second == j) return k;
  throw std::out_of_range("symmetric position outside 3x3");
}

VarId flat(int m, int parity_offset) {
  if (m < 1) throw std::invalid_argument("flat variable index must be positive");
  const int g = (m - 1) / 3;
  const auto [i, j] = kFlat[(m - 1) % 3];
  return VarId::of(2 * g + 1 + parity_offset, i, j);
}

int parse_int(std::string_view s) {
  if (s.empty() || s.size() > 4) throw std::invalid_argument("bad variable index");
  int v = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw std::invalid_argument("bad variable index");
    v = v * 10 + (c - '0');
  }
  return v;
}

}  // namespace

VarId VarId::of(int factor, int i, int j) {
  if (factor < 1 || factor > kMaxFactors) throw std::out_of_range("factor index outside 1..10");
  if (i > j) std::swap(i, j);
  if (i < 1 || j > kMaxHalfDim) throw std::out_of_range("symmetric position outside 3x3");
  return VarId{static_cast<std::uint16_t>(factor), static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j)};
}

VarId VarId::z(int m) { return flat(m, 0); }
VarId VarId::w(int m) { return flat(m, 1); }

VarId VarId::aux(int k) {
  if (k < 0 || k >= kAuxSlots) throw std::out_of_range("auxiliary symbol index");
  return VarId{0, static_cast<std::uint8_t>(k), 0};
}

int VarId::slot() const {
  if (factor == 0) return kSlots - kAuxSlots + i;
  return (factor - 1) * 6 + tri_index(i, j);
}

VarId VarId::from_slot(int slot) {
  if (slot < 0 || slot >= kSlots) throw std::out_of_range("slot");
  if (slot >= kSlots - kAuxSlots) return aux(slot - (kSlots - kAuxSlots));
  const auto [i, j] = kTri[slot % 6];
  return of(slot / 6 + 1, i, j);
}

std::string var_name(VarId v, int n) {
  if (v.is_aux()) return std::string(1, kAuxNames[v.i]);
  const char letter = v.is_lower() ? 'z' : 'w';
  if (n == 2 && v.j <= 2) {
    const int pos = v.i == 1 ? (v.j == 1 ? 0 : 1) : 2;
    return letter + std::to_string(3 * (v.group() - 1) + pos + 1);
  }
  return letter + std::to_string(v.group()) + "_" + std::to_string(v.i) + std::to_string(v.j);
}

VarId parse_var(std::string_view name, int n) {
  if (name.size() == 1) {
    for (int k = 0; k < kAuxSlots; ++k)
      if (name[0] == kAuxNames[k]) return VarId::aux(k);
  }
  if (name.size() < 2 || (name[0] != 'z' && name[0] != 'w'))
    throw std::invalid_argument("unknown variable: " + std::string(name));
  const int offset = name[0] == 'z' ? 0 : 1;
  const std::string_view rest = name.substr(1);
  const auto us = rest.find('_');
  if (us == std::string_view::npos) {
    if (n != 2) throw std::invalid_argument("flat variable names require n = 2: " + std::string(name));
    return flat(parse_int(rest), offset);
  }
  const int group = parse_int(rest.substr(0, us));
  const std::string_view pos = rest.substr(us + 1);
  if (pos.size() != 2 || group < 1) throw std::invalid_argument("unknown variable: " + std::string(name));
  return VarId::of(2 * group - 1 + offset, parse_int(pos.substr(0, 1)), parse_int(pos.substr(1, 1)));
}

}  // namespace sympfact
