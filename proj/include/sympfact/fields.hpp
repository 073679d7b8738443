#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sympfact/report.hpp"
#include "sympfact/strata.hpp"

namespace sympfact {

// Everything here is for n = 2 and levels 1..kMaxFactors.

// Three distinct variables in variable order; never z1.
struct Triple {
  std::array<VarId, 3> v;

  static Triple of(VarId a, VarId b, VarId c);
  // "z2,z3,w1" (any order, separators ',' or whitespace).
  static Triple parse(std::string_view text);
  std::string to_string() const;
  bool contains(VarId x) const { return v[0] == x || v[1] == x || v[2] == x; }

  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

using TripleSet = std::set<Triple>;

// Finitely supported field sum_v c_v d/dv; zero coefficients are not stored.
class VField {
 public:
  void add(VarId v, const MPoly& c);
  MPoly coefficient(VarId v) const;
  const std::map<VarId, MPoly>& coefficients() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  MPoly apply(const MPoly& p) const;
  VField scaled(const MPoly& s) const;
  friend VField operator+(const VField& a, const VField& b);
  friend bool operator==(const VField&, const VField&) = default;
  std::string to_string() const;

 private:
  std::map<VarId, MPoly> coeffs_;
};

// det [[d/dx, d/dy, d/dz], grad P, grad Q] restricted to t.
VField d_field(const MPoly& P, const MPoly& Q, const Triple& t);

// Cached P^K for n = 2 and its first partials.
const LastRow& level_row(int K);
const MPoly& level_partial(int K, int i, VarId v);  // i in 1..4

// The level-K determinant field: built from (P3, P4) at even K, (P1, P2) at odd K.
VField governing_field(int K, const Triple& t);

// Triples whose governing field has no coefficient of degree 2 in the omitted variable.
TripleSet classify_triples(int K);
// Reference form of the same test: full coefficients and degree_in (slow).
bool complete_by_full_coefficients(int K, const Triple& t);
// The new triples at level K predicted by the union patterns of the
// complete-triple lemma, with the base group {z2, z3} (z2 first, z3 last).
TripleSet lemma_new_triples(int K);
// Triples introduced at level K: T_2 for K = 3, T_{K-1} \ T_{K-2} after.
TripleSet xi_set(int K);
// The seven complete level-2 triples, listed by hand.
TripleSet base_triples();

// det of the gradient matrix of (P1..P4)^K restricted to t with row j removed.
MPoly r_minor(int K, const Triple& t, int j);
// Same minor evaluated at a point from numeric gradients.
Rat r_minor_at(int K, const Triple& t, int j, const Point& p);

Report verify_triples(int kmax);
Report verify_r_recursions(int kmax);

enum class SignConvention { Derived, Printed };

// scale * base + correction, with base a lower-level determinant field.
struct LiftedField {
  std::string name;
  int level = 0;
  MPoly scale;
  VField base;
  VField correction;

  MPoly apply(const MPoly& p) const;
  VField expanded() const;
};

// Throw std::invalid_argument unless t is in xi_set(K); K >= 3.
LiftedField build_theta(int K, const Triple& t, SignConvention s = SignConvention::Derived);
LiftedField build_phi(int K, const Triple& t, SignConvention s = SignConvention::Derived);
LiftedField build_gamma(int K);
// Same constructions for any t of level K-1 (no introduction check).
LiftedField lift_theta(int K, const Triple& t, SignConvention s = SignConvention::Derived);
LiftedField lift_phi(int K, const Triple& t, SignConvention s = SignConvention::Derived);

// Every theta/phi/gamma built at levels 3..kmax annihilates P_i^L for
// L = level..kmax. Reports which sign convention of the correction terms is
// tangent and whether the opposite convention is caught.
Report tangency_suite(int kmax, SignConvention s = SignConvention::Derived);

// Rank of the 2 x |T_{K-1}| matrix of level K-1 minors (rows 1,2 for odd K,
// rows 3,4 for even K) at p.
std::size_t omega_rank(int K, const Point& p);
// Rank of the 4 x 7 matrix of level-L minors over the base triples at p.
std::size_t stacked_rank(int L, const Point& p);

struct SpanningResult {
  bool precondition_ok = false;
  std::string precondition;  // reason when not ok
  std::size_t rank = 0;
};
// Rank at p of the new-direction parts of theta^K_t, phi^K_t (t in T_{K-1}) and gamma^K.
SpanningResult spanning_check(int K, const FiberPoint& p);

Report spanning_suite(const std::vector<int>& levels, std::size_t samples, std::uint64_t seed);
Report rank_stability_suite(std::size_t samples, std::uint64_t seed);

// One regenerated table: header plus rows of canonical cell text.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::string> row_labels;
  std::vector<std::vector<std::string>> cells;

  std::string render() const;
};

std::array<Table, 3> regen_tables();
// The transcribed reference tables, cells parsed and re-rendered canonically.
std::array<Table, 3> reference_tables();
// Cell-by-cell comparison; `expected` comes from the reference.
std::vector<Failure> diff_tables(const std::array<Table, 3>& expected, const std::array<Table, 3>& got);
Report tables_suite();

struct WitnessResult {
  std::optional<FiberPoint> point;
  std::string reason;  // why nothing was found
};
// Point of the level-K fiber over a with z2 z3 != 0. `component` restricts
// the search on fibers that split into A1 and A2.
WitnessResult z2z3_witness(int K, const std::vector<Rat>& a, Rng& rng,
                           std::optional<Component> component = std::nullopt, int attempts = 64);

}  // namespace sympfact
