#include "sympfact/fields.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace sympfact {

namespace {

void check_level(int K, int lo) {
  if (K < lo || K > kMaxFactors)
    throw std::invalid_argument("level " + std::to_string(K) + " outside " + std::to_string(lo) + ".." +
                                std::to_string(kMaxFactors));
}

struct LevelCache {
  std::mutex mutex;
  std::map<int, LastRow> rows;
  std::map<std::tuple<int, int, int>, MPoly> partials;
  std::map<std::tuple<int, int, int, int>, MPoly> second;
};

LevelCache& cache() {
  static LevelCache c;
  return c;
}

// d^2 P_i^K / du dv, cached.
const MPoly& level_second(int K, int i, VarId u, VarId v) {
  if (v < u) std::swap(u, v);
  const auto key = std::make_tuple(K, i, u.slot(), v.slot());
  {
    std::lock_guard lock(cache().mutex);
    auto it = cache().second.find(key);
    if (it != cache().second.end()) return it->second;
  }
  MPoly d = level_partial(K, i, u).diff(v);
  std::lock_guard lock(cache().mutex);
  return cache().second.emplace(key, std::move(d)).first->second;
}

// Governing pair (A, B) and the remaining pair (X, Y), 1-based.
struct Roles {
  int a, b, x, y;
};

Roles roles(int level) {
  return level % 2 == 0 ? Roles{3, 4, 1, 2} : Roles{1, 2, 3, 4};
}

// New parameters of factor K: (1,1), (1,2), (2,2).
std::array<VarId, 3> new_group(int K) {
  return {VarId::of(K, 1, 1), VarId::of(K, 1, 2), VarId::of(K, 2, 2)};
}

std::vector<Triple> all_triples(int K) {
  const auto vars = level_variables(K, 2);
  std::vector<Triple> out;
  for (std::size_t a = 0; a < vars.size(); ++a)
    for (std::size_t b = a + 1; b < vars.size(); ++b)
      for (std::size_t c = b + 1; c < vars.size(); ++c) out.push_back(Triple{{vars[a], vars[b], vars[c]}});
  return out;
}

// Gradient rows of P_1..P_4 at level K restricted to t, evaluated at p.
RatMatrix numeric_gradient(int K, const Triple& t, const Point& p) {
  RatMatrix g(4, 3);
  for (int i = 1; i <= 4; ++i)
    for (int c = 0; c < 3; ++c) g(i - 1, c) = level_partial(K, i, t.v[c]).evaluate(p);
  return g;
}

Rat det_rows(const RatMatrix& g, int r1, int r2, int r3) {
  RatMatrix m(3, 3);
  const int rows[3] = {r1 - 1, r2 - 1, r3 - 1};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = g(rows[r], c);
  return rat_det(m);
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) out += (k ? sep : "") + parts[k];
  return out;
}

template <class F>
double timed(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

// ---- Triple ----

Triple Triple::of(VarId a, VarId b, VarId c) {
  std::array<VarId, 3> v{a, b, c};
  std::sort(v.begin(), v.end());
  if (v[0] == v[1] || v[1] == v[2]) throw std::invalid_argument("triple needs three distinct variables");
  for (const auto& x : v) {
    if (x.is_aux()) throw std::invalid_argument("triple cannot contain an auxiliary symbol");
    if (x == VarId::z(1)) throw std::invalid_argument("z1 never enters a triple");
  }
  return Triple{v};
}

Triple Triple::parse(std::string_view text) {
  std::vector<VarId> vs;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) vs.push_back(parse_var(cur, 2));
    cur.clear();
  };
  for (char ch : text) {
    if (ch == ',' || ch == ' ' || ch == '\t' || ch == '(' || ch == ')')
      flush();
    else
      cur += ch;
  }
  flush();
  if (vs.size() != 3) throw std::invalid_argument("triple needs exactly three variables: " + std::string(text));
  return of(vs[0], vs[1], vs[2]);
}

std::string Triple::to_string() const {
  return var_name(v[0]) + "," + var_name(v[1]) + "," + var_name(v[2]);
}

// ---- VField ----

void VField::add(VarId v, const MPoly& c) {
  if (c.is_zero()) return;
  auto it = coeffs_.find(v);
  if (it == coeffs_.end()) {
    coeffs_.emplace(v, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) coeffs_.erase(it);
}

MPoly VField::coefficient(VarId v) const {
  auto it = coeffs_.find(v);
  return it == coeffs_.end() ? MPoly() : it->second;
}

MPoly VField::apply(const MPoly& p) const {
  MPoly out;
  for (const auto& [v, c] : coeffs_) {
    MPoly d = p.diff(v);
    if (!d.is_zero()) out += c * d;
  }
  return out;
}

VField VField::scaled(const MPoly& s) const {
  VField out;
  for (const auto& [v, c] : coeffs_) out.add(v, s * c);
  return out;
}

VField operator+(const VField& a, const VField& b) {
  VField out = a;
  for (const auto& [v, c] : b.coeffs_) out.add(v, c);
  return out;
}

std::string VField::to_string() const {
  if (coeffs_.empty()) return "0";
  std::vector<std::string> parts;
  for (const auto& [v, c] : coeffs_) parts.push_back("(" + c.to_string() + ")*d/d" + var_name(v));
  return join(parts, " + ");
}

VField d_field(const MPoly& P, const MPoly& Q, const Triple& t) {
  std::array<MPoly, 3> dp, dq;
  for (int c = 0; c < 3; ++c) {
    dp[c] = P.diff(t.v[c]);
    dq[c] = Q.diff(t.v[c]);
  }
  auto minor = [&](int u, int v) { return dp[u] * dq[v] - dp[v] * dq[u]; };
  VField f;
  f.add(t.v[0], minor(1, 2));
  f.add(t.v[1], -minor(0, 2));
  f.add(t.v[2], minor(0, 1));
  return f;
}

// ---- level data ----

const LastRow& level_row(int K) {
  check_level(K, 1);
  {
    std::lock_guard lock(cache().mutex);
    auto it = cache().rows.find(K);
    if (it != cache().rows.end()) return it->second;
  }
  LastRow row = last_row(K, 2);
  std::lock_guard lock(cache().mutex);
  return cache().rows.emplace(K, std::move(row)).first->second;
}

const MPoly& level_partial(int K, int i, VarId v) {
  if (i < 1 || i > 4) throw std::invalid_argument("component index must be 1..4");
  const auto key = std::make_tuple(K, i, v.slot());
  {
    std::lock_guard lock(cache().mutex);
    auto it = cache().partials.find(key);
    if (it != cache().partials.end()) return it->second;
  }
  MPoly d = level_row(K)[i - 1].diff(v);
  std::lock_guard lock(cache().mutex);
  return cache().partials.emplace(key, std::move(d)).first->second;
}

VField governing_field(int K, const Triple& t) {
  const Roles r = roles(K);
  std::array<const MPoly*, 3> da, db;
  for (int c = 0; c < 3; ++c) {
    da[c] = &level_partial(K, r.a, t.v[c]);
    db[c] = &level_partial(K, r.b, t.v[c]);
  }
  auto minor = [&](int u, int v) { return *da[u] * *db[v] - *da[v] * *db[u]; };
  VField f;
  f.add(t.v[0], minor(1, 2));
  f.add(t.v[1], -minor(0, 2));
  f.add(t.v[2], minor(0, 1));
  return f;
}

// ---- complete triples ----

// P^K is multilinear, so the x^2 part of A_u B_v - A_v B_u is A_ux B_vx - A_vx B_ux.
// A nonzero value at a random point certifies incompleteness; zeros are confirmed exactly.
TripleSet classify_triples(int K) {
  check_level(K, 2);
  const Roles r = roles(K);
  Rng rng = Rng::derived(0x7c1a55u + std::uint64_t(K), "classify");
  const Point probe = random_point(K, 2, rng);
  std::map<std::tuple<int, int, int>, Rat> values;
  auto value = [&](int i, VarId u, VarId x) {
    if (x < u) std::swap(u, x);
    auto key = std::make_tuple(i, u.slot(), x.slot());
    auto it = values.find(key);
    if (it != values.end()) return it->second;
    return values[key] = level_second(K, i, u, x).evaluate(probe);
  };
  auto quadratic = [&](VarId x, VarId u, VarId v) {
    if (value(r.a, u, x) * value(r.b, v, x) != value(r.a, v, x) * value(r.b, u, x)) return true;
    return !(level_second(K, r.a, u, x) * level_second(K, r.b, v, x) ==
             level_second(K, r.a, v, x) * level_second(K, r.b, u, x));
  };
  TripleSet out;
  for (const auto& t : all_triples(K)) {
    const auto& [x, y, z] = t.v;
    if (!quadratic(x, y, z) && !quadratic(y, x, z) && !quadratic(z, x, y)) out.insert(t);
  }
  return out;
}

bool complete_by_full_coefficients(int K, const Triple& t) {
  check_level(K, 2);
  const VField f = governing_field(K, t);
  for (const auto& x : t.v)
    if (f.coefficient(x).degree_in(x) >= 2) return false;
  return true;
}

TripleSet lemma_new_triples(int K) {
  check_level(K, 3);
  // Old groups in order; the base group is {z2, z3}.
  std::vector<std::vector<VarId>> groups{{VarId::z(2), VarId::z(3)}};
  for (int f = 2; f < K; ++f) {
    const auto g = new_group(f);
    groups.push_back({g.begin(), g.end()});
  }
  const auto [n1, n2, n3] = new_group(K);
  const auto& last = groups.back();
  TripleSet out{Triple::of(n1, n2, n3),
                Triple::of(last.front(), n1, n3),
                Triple::of(last.front(), n2, n3),
                Triple::of(last.back(), n1, n2),
                Triple::of(last.back(), n1, n3)};
  auto with_ends = [&](VarId a, VarId b) {
    out.insert(Triple::of(a, b, n1));
    out.insert(Triple::of(a, b, n3));
  };
  for (const auto& g : groups)
    for (std::size_t a = 0; a < g.size(); ++a)
      for (std::size_t b = a + 1; b < g.size(); ++b) with_ends(g[a], g[b]);
  for (std::size_t k = 0; k + 1 < groups.size(); ++k) {
    with_ends(groups[k].back(), groups[k + 1].front());
    with_ends(groups[k].front(), groups[k + 1].back());
  }
  return out;
}

TripleSet xi_set(int K) {
  check_level(K, 3);
  if (K == 3) return classify_triples(2);
  TripleSet out;
  const TripleSet older = classify_triples(K - 2);
  for (const auto& t : classify_triples(K - 1))
    if (!older.count(t)) out.insert(t);
  return out;
}

TripleSet base_triples() {
  using V = VarId;
  return {Triple::of(V::w(1), V::w(2), V::w(3)), Triple::of(V::z(2), V::w(2), V::w(3)),
          Triple::of(V::z(3), V::w(1), V::w(2)), Triple::of(V::z(2), V::w(1), V::w(3)),
          Triple::of(V::z(3), V::w(1), V::w(3)), Triple::of(V::z(2), V::z(3), V::w(1)),
          Triple::of(V::z(2), V::z(3), V::w(3))};
}

Report verify_triples(int kmax) {
  check_level(kmax, 3);
  Report rep;
  rep.suite = "complete_triples";
  rep.wall_seconds = timed([&] {
    std::map<int, TripleSet> T;
    for (int K = 2; K <= kmax; ++K) T[K] = classify_triples(K);
    ++rep.checked;
    if (T[2] != base_triples()) rep.fail("T2", "7 base triples", std::to_string(T[2].size()) + " triples");
    nlohmann::json sizes = nlohmann::json::object();
    for (int K = 2; K <= kmax; ++K) {
      sizes[std::to_string(K)] = T[K].size();
      for (const auto& t : T[K]) {
        // The structural test and the full-coefficient test agree on T_K.
        if (K <= 4) {
          ++rep.checked;
          if (!complete_by_full_coefficients(K, t)) rep.fail("T" + std::to_string(K) + "[" + t.to_string() + "]", "complete", "quadratic");
        }
      }
      if (K < 3) continue;
      ++rep.checked;
      if (!std::includes(T[K].begin(), T[K].end(), T[K - 1].begin(), T[K - 1].end()))
        rep.fail("T" + std::to_string(K - 1) + " in T" + std::to_string(K), "inclusion", "not included");
      TripleSet fresh;
      std::set_difference(T[K].begin(), T[K].end(), T[K - 1].begin(), T[K - 1].end(),
                          std::inserter(fresh, fresh.end()));
      ++rep.checked;
      const TripleSet predicted = lemma_new_triples(K);
      if (fresh != predicted)
        rep.fail("T" + std::to_string(K) + " new triples", std::to_string(predicted.size()) + " lemma triples",
                 std::to_string(fresh.size()) + " computed");
    }
    rep.details["sizes"] = sizes;
  });
  return rep;
}

// ---- R-minors ----

MPoly r_minor(int K, const Triple& t, int j) {
  check_level(K, 1);
  if (j < 1 || j > 4) throw std::invalid_argument("row index must be 1..4");
  PolyMatrix m(3, 3);
  for (int i = 1, r = 0; i <= 4; ++i) {
    if (i == j) continue;
    for (int c = 0; c < 3; ++c) m(r, c) = level_partial(K, i, t.v[c]);
    ++r;
  }
  return poly_det(m);
}

Rat r_minor_at(int K, const Triple& t, int j, const Point& p) {
  if (j < 1 || j > 4) throw std::invalid_argument("row index must be 1..4");
  const RatMatrix g = numeric_gradient(K, t, p);
  int rows[3], r = 0;
  for (int i = 1; i <= 4; ++i)
    if (i != j) rows[r++] = i;
  return det_rows(g, rows[0], rows[1], rows[2]);
}

Report verify_r_recursions(int kmax) {
  check_level(kmax, 3);
  Report rep;
  rep.suite = "r_minors";
  rep.wall_seconds = timed([&] {
    // R-vectors of the previous level, kept for the recursion step.
    std::map<Triple, std::array<MPoly, 4>> prev;
    for (int K = 2; K <= kmax; ++K) {
      std::map<Triple, std::array<MPoly, 4>> cur;
      for (const auto& t : all_triples(K)) {
        auto& R = cur[t];
        for (int j = 1; j <= 4; ++j) R[j - 1] = r_minor(K, t, j);
        const std::string id = "K=" + std::to_string(K) + " [" + t.to_string() + "]";
        // Identities against the previous-level determinant field.
        if (K >= 3 && (t.v[2].factor < K)) {
          const VField D = governing_field(K - 1, t);
          const LastRow& P = level_row(K - 1);
          std::array<std::pair<int, int>, 2> pairs = K % 2 == 1 ? std::array<std::pair<int, int>, 2>{{{1, 2}, {2, 1}}}
                                                                  : std::array<std::pair<int, int>, 2>{{{3, 4}, {4, 3}}};
          for (const auto& [j, i] : pairs) {
            ++rep.checked;
            if (!(R[j - 1] == D.apply(P[i - 1])))
              rep.fail(id + " R^" + std::to_string(j), "D(P" + std::to_string(i) + ")", R[j - 1].to_string());
          }
        }
        if (K < 3 || t.v[2].factor >= K) continue;
        const auto& old = prev.at(t);
        const auto g = new_group(K);
        const MPoly a = MPoly::var(g[0]), b = MPoly::var(g[1]), c = MPoly::var(g[2]);
        std::array<MPoly, 4> expect = old;
        if (K % 2 == 1) {
          expect[2] = old[2] + b * old[1] - a * old[0];
          expect[3] = old[3] - c * old[1] + b * old[0];
        } else {
          expect[0] = old[0] - a * old[2] + b * old[3];
          expect[1] = old[1] + b * old[2] - c * old[3];
        }
        for (int j = 0; j < 4; ++j) {
          ++rep.checked;
          if (!(expect[j] == R[j]))
            rep.fail(id + " recursion R^" + std::to_string(j + 1), expect[j].to_string(), R[j].to_string());
        }
      }
      prev = std::move(cur);
    }
  });
  return rep;
}

// ---- theta / phi / gamma ----

MPoly LiftedField::apply(const MPoly& p) const {
  MPoly out = correction.apply(p);
  if (!base.is_zero()) {
    MPoly b = base.apply(p);
    if (!b.is_zero()) out += scale * b;
  }
  return out;
}

VField LiftedField::expanded() const { return base.scaled(scale) + correction; }

namespace {

enum class Kind { Theta, Phi };

LiftedField lift(int K, const Triple& t, SignConvention s, Kind kind) {
  check_level(K, 3);
  const int L = K - 1;
  for (const auto& x : t.v)
    if (x.factor > L) throw std::invalid_argument("triple " + t.to_string() + " is not of level " + std::to_string(L));
  const Roles r = roles(L);
  const LastRow& P = level_row(L);
  const MPoly &A = P[r.a - 1], &B = P[r.b - 1];
  VField D = governing_field(L, t);
  const MPoly DX = D.apply(P[r.x - 1]), DY = D.apply(P[r.y - 1]);
  const MPoly sign(s == SignConvention::Derived ? -1 : 1);
  const auto [n1, n2, n3] = new_group(K);

  LiftedField f;
  f.level = K;
  f.base = std::move(D);
  if (kind == Kind::Theta) {
    f.name = "theta^" + std::to_string(K) + "[" + t.to_string() + "]";
    f.scale = A * A;
    f.correction.add(n2, sign * A * DY);
    f.correction.add(n1, sign * (A * DX - B * DY));
  } else {
    f.name = "phi^" + std::to_string(K) + "[" + t.to_string() + "]";
    f.scale = B * B;
    f.correction.add(n2, sign * B * DX);
    f.correction.add(n3, sign * (B * DY - A * DX));
  }
  return f;
}

void require_introduced(int K, const Triple& t) {
  check_level(K, 3);
  if (!xi_set(K).count(t))
    throw std::invalid_argument("triple " + t.to_string() + " is not introduced on level " + std::to_string(K));
}

}  // namespace

LiftedField lift_theta(int K, const Triple& t, SignConvention s) { return lift(K, t, s, Kind::Theta); }
LiftedField lift_phi(int K, const Triple& t, SignConvention s) { return lift(K, t, s, Kind::Phi); }

LiftedField build_theta(int K, const Triple& t, SignConvention s) {
  require_introduced(K, t);
  return lift_theta(K, t, s);
}

LiftedField build_phi(int K, const Triple& t, SignConvention s) {
  require_introduced(K, t);
  return lift_phi(K, t, s);
}

LiftedField build_gamma(int K) {
  check_level(K, 3);
  const Roles r = roles(K - 1);
  const LastRow& P = level_row(K - 1);
  const MPoly &A = P[r.a - 1], &B = P[r.b - 1];
  const auto [n1, n2, n3] = new_group(K);
  LiftedField f;
  f.name = "gamma^" + std::to_string(K);
  f.level = K;
  f.correction.add(n1, B * B);
  f.correction.add(n2, -(A * B));
  f.correction.add(n3, A * A);
  return f;
}

namespace {

// First (L, i) where f fails to annihilate P_i^L, for L = f.level..kmax.
std::optional<std::pair<int, int>> first_violation(const LiftedField& f, int kmax) {
  for (int L = f.level; L <= kmax; ++L)
    for (int i = 1; i <= 4; ++i)
      if (!f.apply(level_row(L)[i - 1]).is_zero()) return std::make_pair(L, i);
  return std::nullopt;
}

}  // namespace

Report tangency_suite(int kmax, SignConvention s) {
  check_level(kmax, 3);
  if (kmax > 6) throw std::invalid_argument("tangency suite is capped at level 6");
  Report rep;
  rep.suite = "tangency";
  rep.wall_seconds = timed([&] {
    for (int K = 3; K <= kmax; ++K) {
      std::vector<LiftedField> fields;
      for (const auto& t : xi_set(K)) {
        fields.push_back(build_theta(K, t, s));
        fields.push_back(build_phi(K, t, s));
      }
      fields.push_back(build_gamma(K));
      for (const auto& f : fields) {
        for (int L = K; L <= kmax; ++L)
          for (int i = 1; i <= 4; ++i) {
            ++rep.checked;
            const MPoly v = f.apply(level_row(L)[i - 1]);
            if (!v.is_zero())
              rep.fail(f.name + " on P" + std::to_string(i) + "^" + std::to_string(L), "0",
                       std::to_string(v.size()) + " terms");
          }
      }
    }
    // Conformance of both sign conventions on the level-3 and level-4 fields.
    auto convention_tangent = [&](SignConvention c) {
      for (int K = 3; K <= 4; ++K)
        for (const auto& t : xi_set(K))
          if (first_violation(lift_theta(K, t, c), K) || first_violation(lift_phi(K, t, c), K)) return false;
      return true;
    };
    const bool derived_ok = convention_tangent(SignConvention::Derived);
    const bool printed_ok = convention_tangent(SignConvention::Printed);
    rep.details["sign_convention"] = s == SignConvention::Derived ? "derived" : "printed";
    rep.details["printed_signs_tangent"] = printed_ok;
    rep.details["negated_signs_tangent"] = derived_ok;
    // Negative control: the other convention must be caught.
    rep.details["negative_control_caught"] = s == SignConvention::Derived ? !printed_ok : !derived_ok;
  });
  return rep;
}

// ---- rank and spanning ----

std::size_t omega_rank(int K, const Point& p) {
  check_level(K, 3);
  const int L = K - 1;
  const std::array<int, 2> rows = K % 2 == 1 ? std::array<int, 2>{1, 2} : std::array<int, 2>{3, 4};
  const TripleSet T = classify_triples(L);
  RatMatrix m(2, T.size());
  std::size_t c = 0;
  for (const auto& t : T) {
    for (int r = 0; r < 2; ++r) m(r, c) = r_minor_at(L, t, rows[r], p);
    ++c;
  }
  return exact_rank(m);
}

std::size_t stacked_rank(int L, const Point& p) {
  check_level(L, 2);
  const TripleSet T = base_triples();
  RatMatrix m(4, T.size());
  std::size_t c = 0;
  for (const auto& t : T) {
    for (int j = 1; j <= 4; ++j) m(j - 1, c) = r_minor_at(L, t, j, p);
    ++c;
  }
  return exact_rank(m);
}

SpanningResult spanning_check(int K, const FiberPoint& fp) {
  check_level(K, 4);
  SpanningResult res;
  const Point& p = fp.point;
  const std::vector<Rat> a = fp.target.empty() ? phi(p, K, 2) : fp.target;
  const StratumLabel label = classify_fiber(K, a).label;
  if (label != StratumLabel::GenericSmooth && label != StratumLabel::GenericSingular) {
    res.precondition = std::string("fiber is ") + to_string(label);
    return res;
  }
  if (is_zero(p.at(VarId::z(2)) * p.at(VarId::z(3)))) {
    res.precondition = "z2*z3 = 0 at the point";
    return res;
  }
  res.precondition_ok = true;

  // New-direction parts of theta, phi (t in T_{K-1}) and gamma, from level K-1 data at p.
  const int L = K - 1;
  const Roles r = roles(L);
  auto val = [&](int i) { return level_row(L)[i - 1].evaluate(p); };
  const Rat A = val(r.a), B = val(r.b);
  std::vector<std::array<Rat, 3>> rows;
  rows.push_back({B * B, -(A * B), A * A});
  for (const auto& t : classify_triples(L)) {
    const RatMatrix g = numeric_gradient(L, t, p);
    const Rat DX = det_rows(g, r.x, r.a, r.b), DY = det_rows(g, r.y, r.a, r.b);
    rows.push_back({-(A * DX - B * DY), -(A * DY), Rat(0)});
    rows.push_back({Rat(0), -(B * DX), -(B * DY - A * DX)});
  }
  RatMatrix m(rows.size(), 3);
  for (std::size_t k = 0; k < rows.size(); ++k)
    for (int c = 0; c < 3; ++c) m(k, c) = rows[k][c];
  res.rank = exact_rank(m);
  return res;
}

Report spanning_suite(const std::vector<int>& levels, std::size_t samples, std::uint64_t seed) {
  Report rep;
  rep.suite = "spanning";
  rep.wall_seconds = timed([&] {
    nlohmann::json skipped = nlohmann::json::object();
    for (int K : levels) {
      Rng rng = Rng::derived(seed, "spanning-" + std::to_string(K));
      std::size_t done = 0, rejected = 0;
      for (std::size_t attempt = 0; done < samples && attempt < 20 * samples; ++attempt) {
        FiberPoint fp;
        switch (attempt % 3) {
          case 0: {
            Point p = random_point(K, 2, rng);
            fp = FiberPoint{p, K, 2, phi(p, K, 2)};
            break;
          }
          case 1:
            fp = sample_on_fiber(K, random_target(K, StratumLabel::GenericSmooth, rng), rng);
            break;
          default:
            fp = sample_on_fiber(K, random_target(K, K % 2 == 1 ? StratumLabel::GenericSingular
                                                                : StratumLabel::GenericSmooth, rng), rng);
        }
        const SpanningResult res = spanning_check(K, fp);
        if (!res.precondition_ok) {
          ++rejected;
          continue;
        }
        ++done;
        ++rep.checked;
        if (res.rank != 3)
          rep.fail("K=" + std::to_string(K) + " sample " + std::to_string(done), "rank 3",
                   "rank " + std::to_string(res.rank));
      }
      if (done < samples)
        rep.fail("K=" + std::to_string(K) + " sampling", std::to_string(samples) + " points",
                 std::to_string(done) + " points");
      skipped[std::to_string(K)] = rejected;
    }
    rep.details["precondition_rejections"] = skipped;
  });
  return rep;
}

Report rank_stability_suite(std::size_t samples, std::uint64_t seed) {
  Report rep;
  rep.suite = "rank_stability";
  rep.wall_seconds = timed([&] {
    Rng rng = Rng::derived(seed, "rank-stability");
    for (std::size_t s = 0; s < samples; ++s) {
      const Point p = random_point(6, 2, rng);
      const std::string id = "sample " + std::to_string(s);
      const std::size_t base = stacked_rank(2, p);
      for (int L = 3; L <= 6; ++L) {
        ++rep.checked;
        const std::size_t rk = stacked_rank(L, p);
        if (rk != base)
          rep.fail(id + " level " + std::to_string(L), "rank " + std::to_string(base), "rank " + std::to_string(rk));
      }
      for (int K = 3; K <= 6; ++K) {
        ++rep.checked;
        const std::size_t rk = omega_rank(K, p);
        if (rk > 2) rep.fail(id + " omega K=" + std::to_string(K), "rank <= 2", "rank " + std::to_string(rk));
      }
    }
  });
  return rep;
}

// ---- tables ----

std::string Table::render() const {
  std::ostringstream os;
  os << "# " << name << "\n" << join(columns, " | ") << "\n";
  for (std::size_t r = 0; r < row_labels.size(); ++r) {
    std::vector<std::string> line{row_labels[r]};
    line.insert(line.end(), cells[r].begin(), cells[r].end());
    os << join(line, " | ") << "\n";
  }
  return os.str();
}

namespace {

std::string triple_label(const Triple& t) {
  return var_name(t.v[0]) + " " + var_name(t.v[1]) + " " + var_name(t.v[2]);
}

// Row order of the first two tables.
std::vector<Triple> table_triples() {
  return {Triple::parse("w1,w2,w3"), Triple::parse("z2,w2,w3"), Triple::parse("z3,w1,w2"),
          Triple::parse("z2,w1,w3"), Triple::parse("z3,w1,w3"), Triple::parse("z2,z3,w1"),
          Triple::parse("z2,z3,w3")};
}

const std::vector<VarId> kTable1Columns{VarId::z(2), VarId::z(3), VarId::w(1), VarId::w(2), VarId::w(3)};
const std::vector<VarId> kTable3Columns{VarId::z(2), VarId::z(3), VarId::z(5), VarId::z(6)};

Table skeleton(int which) {
  Table t;
  if (which == 0) {
    t.name = "table1: level-2 determinant field coefficients";
    t.columns = {"triple"};
    for (auto v : kTable1Columns) t.columns.push_back("d/d" + var_name(v));
    for (const auto& tr : table_triples()) t.row_labels.push_back(triple_label(tr));
  } else if (which == 1) {
    t.name = "table2: level-2 R-minors";
    t.columns = {"triple", "R^{2,1}", "R^{2,2}", "R^{2,3}", "R^{2,4}"};
    for (const auto& tr : table_triples()) t.row_labels.push_back(triple_label(tr));
  } else {
    t.name = "table3: level-4 partials on z2 = z3 = z5 = z6 = 0";
    t.columns = {"component"};
    for (auto v : kTable3Columns) t.columns.push_back("d/d" + var_name(v));
    t.row_labels = {"P1", "P2", "P3", "P4"};
  }
  return t;
}

// Transcribed cells, in the row and column order of the skeletons.
const char* const kTable1Cells[7][5] = {
    {"0", "0", "z3^2", "-z2z3", "z2^2"},
    {"z3^2", "0", "0", "-w1z3", "w1z2-w2z3"},
    {"0", "z2^2", "z3w3-w2z2", "-z2w3", "0"},
    {"z2z3", "0", "-w1z3", "0", "-z2w2"},
    {"0", "z2z3", "-w2z3", "0", "-z2w3"},
    {"-z2w3", "z2w2", "w1w3-w2^2", "0", "0"},
    {"w2z3", "w1z3", "0", "0", "w1w3-w2^2"},
};

const char* const kTable2Cells[7][4] = {
    {"0", "0", "0", "0"},         {"0", "z3^2", "0", "0"},    {"z2^2", "0", "0", "0"},
    {"0", "z2z3", "0", "0"},      {"z2z3", "0", "0", "0"},    {"z2w2", "-z2w3", "0", "z2"},
    {"-z3w1", "z3w2", "z3", "0"},
};

const char* const kTable3Cells[4][4] = {
    {"1+w1z4", "w3z4", "1", "0"},
    {"0", "1", "0", "1"},
    {"w1+w4+w1w4z4", "w2+w5+w2w4z4", "w4", "w5"},
    {"w2+w5+w1w5z4", "w3+w6+w2w5z4", "w5", "w6"},
};

}  // namespace

std::array<Table, 3> regen_tables() {
  std::array<Table, 3> out{skeleton(0), skeleton(1), skeleton(2)};
  for (const auto& t : table_triples()) {
    const VField f = governing_field(2, t);
    std::vector<std::string> row1, row2;
    for (auto v : kTable1Columns) row1.push_back(f.coefficient(v).to_string());
    for (int j = 1; j <= 4; ++j) row2.push_back(r_minor(2, t, j).to_string());
    out[0].cells.push_back(row1);
    out[1].cells.push_back(row2);
  }
  Point on_c;
  for (int m : {2, 3, 5, 6}) on_c.set(VarId::z(m), 0);
  for (int i = 1; i <= 4; ++i) {
    std::vector<std::string> row;
    for (auto v : kTable3Columns) row.push_back(level_partial(4, i, v).substitute(on_c).to_string());
    out[2].cells.push_back(row);
  }
  return out;
}

std::array<Table, 3> reference_tables() {
  std::array<Table, 3> out{skeleton(0), skeleton(1), skeleton(2)};
  auto canon = [](const char* s) { return MPoly::parse(s).to_string(); };
  for (int r = 0; r < 7; ++r) {
    std::vector<std::string> row1, row2;
    for (int c = 0; c < 5; ++c) row1.push_back(canon(kTable1Cells[r][c]));
    for (int c = 0; c < 4; ++c) row2.push_back(canon(kTable2Cells[r][c]));
    out[0].cells.push_back(row1);
    out[1].cells.push_back(row2);
  }
  for (int r = 0; r < 4; ++r) {
    std::vector<std::string> row;
    for (int c = 0; c < 4; ++c) row.push_back(canon(kTable3Cells[r][c]));
    out[2].cells.push_back(row);
  }
  return out;
}

std::vector<Failure> diff_tables(const std::array<Table, 3>& expected, const std::array<Table, 3>& got) {
  std::vector<Failure> out;
  for (int k = 0; k < 3; ++k) {
    const Table &e = expected[k], &g = got[k];
    const std::string tag = "table" + std::to_string(k + 1);
    if (e.columns != g.columns || e.row_labels != g.row_labels || e.cells.size() != g.cells.size()) {
      out.push_back({tag + " layout", join(e.columns, " | "), join(g.columns, " | ")});
      continue;
    }
    for (std::size_t r = 0; r < e.cells.size(); ++r)
      for (std::size_t c = 0; c < e.cells[r].size(); ++c)
        if (c >= g.cells[r].size() || e.cells[r][c] != g.cells[r][c])
          out.push_back({tag + " [" + e.row_labels[r] + "][" + e.columns[c + 1] + "]", e.cells[r][c],
                         c < g.cells[r].size() ? g.cells[r][c] : "<missing>"});
  }
  return out;
}

Report tables_suite() {
  Report rep;
  rep.suite = "tables";
  rep.wall_seconds = timed([&] {
    const auto got = regen_tables();
    const auto expected = reference_tables();
    for (const auto& t : expected)
      for (const auto& row : t.cells) rep.checked += row.size();
    rep.failures = diff_tables(expected, got);
  });
  return rep;
}

// ---- witnesses ----

WitnessResult z2z3_witness(int K, const std::vector<Rat>& a, Rng& rng, std::optional<Component> component,
                           int attempts) {
  check_level(K, 3);
  if (a.size() != 4) throw std::invalid_argument("witness search needs a 4-vector");
  if (std::all_of(a.begin(), a.end(), [](const Rat& x) { return is_zero(x); }))
    throw std::invalid_argument("the zero row is not in the image");
  const bool bottom_zero = is_zero(a[2]) && is_zero(a[3]);
  if (K == 3 && bottom_zero && (is_zero(a[0]) || is_zero(a[1])))
    return {std::nullopt, "level-3 fiber over (a1, a2, 0, 0) with a1 a2 = 0 forces z2 = a1, z3 = a2"};
  if (component) {
    if (K != 3 || !is_zero(a[2]) || a[3] != 1)
      return {std::nullopt, "components A1, A2 exist only on level-3 fibers over (a1, a2, 0, 1)"};
    if (*component == Component::A1) return {std::nullopt, "z2 = z3 = 0 on the component A1"};
  }
  // The sampler puts a nonzero (z2, z3) with W1 (z2, z3)^T = 0 on the singular
  // level-3 fibers, so its points there lie on A2 off A1.
  for (int k = 0; k < attempts; ++k) {
    FiberPoint fp = sample_on_fiber(K, a, rng);
    if (is_zero(fp.point.at(VarId::z(2)) * fp.point.at(VarId::z(3)))) continue;
    if (phi(fp.point, K, 2) != a) throw std::logic_error("witness left its fiber");
    return {std::move(fp), ""};
  }
  return {std::nullopt, "no point with z2 z3 != 0 after " + std::to_string(attempts) + " attempts"};
}

}  // namespace sympfact
