#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace sympfact {

inline constexpr int kMaxFactors = 10;
inline constexpr int kMaxHalfDim = 3;
inline constexpr int kSlots = 64;
inline constexpr int kAuxSlots = 4;

// Position (i, j), i <= j, inside the symmetric parameter block of factor k.
// Odd k is a lower factor, even k an upper one. factor == 0 marks an auxiliary
// symbol (a, b, c, d) used for free parameters such as the Whitehead variable.
struct VarId {
  std::uint16_t factor = 0;
  std::uint8_t i = 0;
  std::uint8_t j = 0;

  static VarId of(int factor, int i, int j);
  // Flat names for n = 2: lower group g holds z_{3g-2}, z_{3g-1}, z_{3g} at
  // (1,1), (1,2), (2,2); upper groups use w the same way.
  static VarId z(int m);
  static VarId w(int m);
  static VarId aux(int k);
  static VarId from_slot(int slot);

  bool is_aux() const { return factor == 0; }
  bool is_lower() const { return factor % 2 == 1; }
  bool is_upper() const { return factor != 0 && factor % 2 == 0; }
  // 1-based index of the lower (or upper) group this factor belongs to.
  int group() const { return (factor + 1) / 2; }

  // Dense exponent slot; the slot order is the variable order.
  int slot() const;

  friend bool operator==(const VarId&, const VarId&) = default;
  friend std::strong_ordering operator<=>(const VarId& a, const VarId& b) {
    return a.slot() <=> b.slot();
  }
};

// z2, w5 for n = 2; z1_22, w2_13 (group, row, column) otherwise; aux as a..d.
std::string var_name(VarId v, int n = 2);
// Inverse of var_name; throws std::invalid_argument.
VarId parse_var(std::string_view name, int n = 2);

}  // namespace sympfact
