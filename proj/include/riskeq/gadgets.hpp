// Copyright 2026 The riskeq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdlib>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "riskeq/equilibrium.hpp"
#include "riskeq/game.hpp"
#include "riskeq/scalar.hpp"
#include "riskeq/scheduling.hpp"
#include "riskeq/valuation.hpp"

namespace riskeq {

// ---------------------------------------------------------------------------
// Crawford game

inline Game crawford(const Rational& delta) {
  if (delta <= 0 || delta >= 1) throw std::invalid_argument("crawford delta must lie in (0,1)");
  const Scalar d(delta);
  const Scalar one = Scalar::exact(1);
  std::vector<std::vector<std::string>> labels(2, {"crawford:f1", "crawford:f2"});
  // (f1,f1), (f1,f2), (f2,f1), (f2,f2)
  return Game(labels, {one + d, one + d, one, one + 2 * d, one, one + 2 * d, one + 2 * d, one});
}

// ---------------------------------------------------------------------------
// SAT game

// Literals are signed 1-based variable indices.
struct CnfFormula {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
};

inline void validate(const CnfFormula& phi) {
  if (phi.num_vars <= 0) throw std::invalid_argument("formula needs at least one variable");
  if (phi.clauses.empty()) throw std::invalid_argument("formula has no clauses");
  for (const auto& c : phi.clauses) {
    if (c.empty()) throw std::invalid_argument("empty clause");
    for (int lit : c)
      if (lit == 0 || std::abs(lit) > phi.num_vars)
        throw std::invalid_argument("literal " + std::to_string(lit) + " out of range");
  }
}

inline bool satisfies(const CnfFormula& phi, const std::vector<bool>& assignment) {
  if (assignment.size() != static_cast<std::size_t>(phi.num_vars))
    throw std::invalid_argument("assignment length differs from variable count");
  for (const auto& c : phi.clauses) {
    bool sat = false;
    for (int lit : c) sat = sat || (assignment[std::abs(lit) - 1] == (lit > 0));
    if (!sat) return false;
  }
  return true;
}

// Strategy layout shared by both players: clauses, variables, literals
// (+v1, -v1, +v2, ...), then f1, f2.
struct SatLayout {
  std::size_t k = 0;  // clauses
  std::size_t m = 0;  // variables
  std::size_t size() const { return k + 3 * m + 2; }
  std::size_t clause(std::size_t j) const { return j; }
  std::size_t var(std::size_t v) const { return k + v; }
  // v is 0-based, positive selects +v
  std::size_t literal(std::size_t v, bool positive) const { return k + m + 2 * v + (positive ? 0 : 1); }
  std::size_t literal(int lit) const { return literal(std::abs(lit) - 1, lit > 0); }
  std::size_t f(std::size_t which) const { return k + 3 * m + which; }
};

inline SatLayout sat_layout(const CnfFormula& phi) {
  return {phi.clauses.size(), static_cast<std::size_t>(phi.num_vars)};
}

inline Game sat_game(const CnfFormula& phi, const Rational& delta) {
  validate(phi);
  if (delta <= 0 || delta * 4 > 1) throw std::invalid_argument("sat game delta must lie in (0, 1/4]");
  const SatLayout lay = sat_layout(phi);
  const long m = static_cast<long>(lay.m);
  const Scalar d(delta);

  enum class Kind { kClause, kVar, kLit, kF };
  struct Strat {
    Kind kind;
    std::size_t index;  // clause, variable, or f index
    int lit = 0;
  };
  std::vector<Strat> strats;
  std::vector<std::string> labels;
  for (std::size_t j = 0; j < lay.k; ++j) {
    strats.push_back({Kind::kClause, j});
    labels.push_back("clause:c" + std::to_string(j + 1));
  }
  for (std::size_t v = 0; v < lay.m; ++v) {
    strats.push_back({Kind::kVar, v});
    labels.push_back("var:v" + std::to_string(v + 1));
  }
  for (std::size_t v = 0; v < lay.m; ++v) {
    int x = static_cast<int>(v + 1);
    strats.push_back({Kind::kLit, v, x});
    labels.push_back("lit:+v" + std::to_string(x));
    strats.push_back({Kind::kLit, v, -x});
    labels.push_back("lit:-v" + std::to_string(x));
  }
  strats.push_back({Kind::kF, 0});
  labels.push_back("crawford:f1");
  strats.push_back({Kind::kF, 1});
  labels.push_back("crawford:f2");

  auto in_clause = [&](int lit, std::size_t j) {
    for (int x : phi.clauses[j])
      if (x == lit) return true;
    return false;
  };
  using Pair = std::array<Scalar, 2>;
  auto E = [](long v) { return Scalar::exact(v); };
  // Tabulated cells; nullopt defers to the mirror rule.
  auto table = [&](const Strat& a, const Strat& b) -> std::optional<Pair> {
    if (a.kind == Kind::kLit) {
      switch (b.kind) {
        case Kind::kLit: return a.lit == -b.lit ? Pair{E(2), E(2)} : Pair{E(1), E(1)};
        case Kind::kVar: return Pair{E(2), E(a.index == b.index ? m : 0)};
        case Kind::kClause: return Pair{E(2), E(in_clause(a.lit, b.index) ? m : 0)};
        case Kind::kF: return Pair{E(2), E(1)};
      }
    }
    if (a.kind == Kind::kVar && (b.kind == Kind::kVar || b.kind == Kind::kClause)) return Pair{E(2), E(2)};
    if (a.kind == Kind::kClause && b.kind == Kind::kClause) return Pair{E(2), E(2)};
    if ((a.kind == Kind::kVar || a.kind == Kind::kClause) && b.kind == Kind::kF) return Pair{E(2), E(1)};
    if (a.kind == Kind::kF && b.kind == Kind::kF) {
      if (a.index == 0 && b.index == 0) return Pair{1 + d, 1 + d};
      if (a.index == 1 && b.index == 1) return Pair{1 + 2 * d, E(1)};
      return Pair{E(1), 1 + 2 * d};
    }
    return std::nullopt;
  };

  std::vector<std::vector<std::string>> both(2, labels);
  return Game::from_function(both, [&](const PureProfile& s) {
    const Strat& a = strats[s[0]];
    const Strat& b = strats[s[1]];
    if (auto c = table(a, b)) return std::vector<Scalar>{(*c)[0], (*c)[1]};
    auto mirrored = table(b, a);
    if (!mirrored) throw std::logic_error("sat game cell missing from both table orientations");
    return std::vector<Scalar>{(*mirrored)[1], (*mirrored)[0]};
  });
}

// Both players put 1/m on each true literal.
inline MixedProfile sat_assignment_to_profile(const CnfFormula& phi, const std::vector<bool>& assignment) {
  validate(phi);
  if (!satisfies(phi, assignment)) throw std::invalid_argument("assignment does not satisfy the formula");
  const SatLayout lay = sat_layout(phi);
  std::vector<Scalar> row(lay.size(), Scalar::exact(0));
  for (std::size_t v = 0; v < lay.m; ++v)
    row[lay.literal(v, assignment[v])] = Scalar::exact(1, static_cast<long>(lay.m));
  return MixedProfile{{row, row}};
}

// ---------------------------------------------------------------------------
// 3-dimensional matching and multibalanced partition

// Triples are 1-based (w, x, y) with coordinates in [q].
struct TdmInstance {
  long q = 0;
  std::vector<std::array<long, 3>> triples;
};

inline void validate(const TdmInstance& t) {
  if (t.q <= 0) throw std::invalid_argument("3DM size q must be positive");
  for (const auto& tr : t.triples)
    for (long c : tr)
      if (c < 1 || c > t.q) throw std::invalid_argument("3DM triple coordinate out of range");
}

// True when the chosen triples (0-based indices) form a perfect matching.
inline bool is_matching(const TdmInstance& t, const std::vector<std::size_t>& chosen) {
  if (chosen.size() != static_cast<std::size_t>(t.q)) return false;
  std::array<std::set<long>, 3> used;
  for (std::size_t idx : chosen)
    for (int c = 0; c < 3; ++c)
      if (!used[c].insert(t.triples.at(idx)[c]).second) return false;
  return true;
}

struct MbpInstance {
  std::size_t n = 0;  // rows
  std::size_t m = 0;  // columns
  std::vector<std::vector<long>> a;
};

inline void validate(const MbpInstance& inst) {
  if (inst.a.size() != inst.n) throw DimensionError("MBP matrix row count");
  for (const auto& row : inst.a) {
    if (row.size() != inst.m) throw DimensionError("MBP matrix column count");
    for (long v : row)
      if (v < 0) throw std::invalid_argument("MBP entries must be nonnegative");
  }
}

// Rows 0..k-1 are triple indicators over the 3q coordinates; the last row is
// twice the column sums of the others.
inline MbpInstance tdm_to_mbp(const TdmInstance& t) {
  validate(t);
  const std::size_t k = t.triples.size();
  MbpInstance out;
  out.n = k + 1;
  out.m = static_cast<std::size_t>(3 * t.q);
  out.a.assign(out.n, std::vector<long>(out.m, 0));
  for (std::size_t i = 0; i < k; ++i)
    for (int c = 0; c < 3; ++c) out.a[i][static_cast<std::size_t>(c * t.q + t.triples[i][c] - 1)] = 1;
  for (std::size_t j = 0; j < out.m; ++j) {
    long b = 0;
    for (std::size_t i = 0; i < k; ++i) b += out.a[i][j];
    out.a[k][j] = 2 * b;
  }
  return out;
}

// Row subset I (0-based) with sum_{i in I} a_ij = 3 + 2 sum_{i not in I} a_ij for every column.
inline bool mbp_verify(const MbpInstance& inst, const std::set<std::size_t>& rows) {
  validate(inst);
  for (std::size_t r : rows)
    if (r >= inst.n) throw std::invalid_argument("MBP row index out of range");
  for (std::size_t j = 0; j < inst.m; ++j) {
    long in = 0, out = 0;
    for (std::size_t i = 0; i < inst.n; ++i) (rows.count(i) ? in : out) += inst.a[i][j];
    if (in != 3 + 2 * out) return false;
  }
  return true;
}

// Lifts a matching (0-based triple indices) to the MBP row subset.
inline std::set<std::size_t> matching_to_rows(const TdmInstance& t, const std::vector<std::size_t>& chosen) {
  std::set<std::size_t> rows(chosen.begin(), chosen.end());
  rows.insert(t.triples.size());
  return rows;
}

// Column sums bound below by 4.
inline long mbp_gadget_M(const MbpInstance& inst) {
  long best = 0;
  for (std::size_t j = 0; j < inst.m; ++j) {
    long s = 0;
    for (std::size_t i = 0; i < inst.n; ++i) s += inst.a[i][j];
    best = std::max(best, s);
  }
  return std::max(best, 4L);
}

// Player index of gadget player [k, j], k a column, j in 0..4.
inline std::size_t mbp_gadget_player(const MbpInstance& inst, std::size_t k, std::size_t j) {
  return inst.n + 5 * k + j;
}

// Row players first, then five gadget players per column. Links 0 and 1 are
// the two ordered links.
inline SchedulingGame mbp_to_scheduling(const MbpInstance& inst) {
  validate(inst);
  const long M = mbp_gadget_M(inst);
  SchedulingGame g(inst.n + 5 * inst.m, 2);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < inst.n; ++i) names.push_back("row" + std::to_string(i + 1));
  for (std::size_t k = 0; k < inst.m; ++k)
    for (std::size_t j = 0; j < 5; ++j) names.push_back("[" + std::to_string(k + 1) + "," + std::to_string(j) + "]");
  g.set_player_names(std::move(names));
  for (std::size_t k = 0; k < inst.m; ++k) {
    for (std::size_t j = 0; j < 5; ++j) {
      const std::size_t pj = mbp_gadget_player(inst, k, j);
      for (std::size_t i = 0; i < 5; ++i) {
        const std::size_t pi = mbp_gadget_player(inst, k, i);
        const bool successor = j < 4 && i == (j + 1) % 4;
        const long base = successor ? M - 4 : M;
        g.set_weight(pj, pi, 0, base);
        g.set_weight(pj, pi, 1, base + 1);
      }
    }
    const std::size_t p4 = mbp_gadget_player(inst, k, 4);
    for (std::size_t row = 0; row < inst.n; ++row) {
      g.set_weight(p4, row, 0, inst.a[row][k]);
      g.set_weight(p4, row, 1, 2 * inst.a[row][k]);
    }
  }
  return g;
}

namespace detail {

// Risk part of the two-value distribution {0 w.p. 1-x, d w.p. x}, without the
// linear expectation term.
inline Scalar two_value_risk_only(const ValuationSpec& spec, long d, const Scalar& x) {
  const Mode m = x.mode();
  TwoValueDist dist{Scalar::zero(m), Scalar::from_int(d, m), x};
  Scalar r = two_value_R(spec, dist);
  if (const auto* ms = std::get_if<MomentSum>(&spec))
    r -= (Scalar::from_rational(ms->alpha0, m) - 1) * x * d;
  return r;
}

inline Rational expectation_weight(const ValuationSpec& spec) {
  if (const auto* ms = std::get_if<MomentSum>(&spec)) return ms->alpha0;
  return 1;
}

}  // namespace detail

// h(x) = alpha0 x (2M+1) + R(M+1, x) - R(M, x); the lifted profile is an
// equilibrium when alpha0 <= h(x) <= alpha0 (2M-6).
inline Scalar mbp_h(const ValuationSpec& spec, long M, const Scalar& x) {
  const Scalar a0 = Scalar::from_rational(detail::expectation_weight(spec), x.mode());
  return a0 * x * (2 * M + 1) + detail::two_value_risk_only(spec, M + 1, x) -
         detail::two_value_risk_only(spec, M, x);
}

struct MbpLift {
  MixedProfile profile;
  Rational x;  // probability of link 2 for every [k,4]
  long M = 0;
  bool bisected = false;
};

// Rows in I on link 1, the rest on link 2; [k,0],[k,2] on link 1, [k,1],[k,3]
// on link 2, [k,4] mixed. x starts at 1/(2M+1) and is bisected over
// rationals when h overshoots the window. The result is verified before it
// is returned.
inline MbpLift mbp_solution_to_profile(const MbpInstance& inst, const std::set<std::size_t>& rows,
                                       const ValuationSpec& spec) {
  validate(spec);
  if (!std::holds_alternative<VarRisk>(spec) && !std::holds_alternative<SdRisk>(spec) &&
      !std::holds_alternative<MomentSum>(spec))
    throw SpecError("MBP lifting supports e+var, e+sd, and moment-sum valuations");
  if (!mbp_verify(inst, rows)) throw std::invalid_argument("row subset does not solve the MBP instance");
  const long M = mbp_gadget_M(inst);
  const Rational a0 = detail::expectation_weight(spec);
  if (a0 <= 0) throw SpecError("MBP lifting needs a positive expectation weight");
  const Mode hm = needs_roots(spec) ? Mode::kFloat : Mode::kExact;
  auto h = [&](const Rational& x) { return mbp_h(spec, M, Scalar(x).as(hm)); };
  const Scalar lo_bound = Scalar(a0).as(hm);
  const Scalar hi_bound = Scalar(Rational(a0 * (2 * M - 6))).as(hm);
  auto in_window = [&](const Scalar& v) { return !(v < lo_bound) && !(v > hi_bound); };

  MbpLift out;
  out.M = M;
  Rational x(1, 2 * M + 1);
  if (!in_window(h(x))) {
    if (h(x) < lo_bound) throw std::runtime_error("h(1/(2M+1)) falls below the window");
    Rational lo(0), hi = x;
    bool hit = false;
    for (int it = 0; it < 200 && !hit; ++it) {
      Rational mid = (lo + hi) / 2;
      Scalar v = h(mid);
      if (in_window(v)) {
        x = mid;
        hit = true;
      } else if (v < lo_bound) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    if (!hit) throw std::runtime_error("bisection found no x with h(x) inside the window");
    out.bisected = true;
  }
  out.x = x;

  SchedulingGame g = mbp_to_scheduling(inst);
  const Scalar zero = Scalar::exact(0), one = Scalar::exact(1);
  MixedProfile p;
  p.probs.assign(g.num_players(), {one, zero});
  for (std::size_t i = 0; i < inst.n; ++i)
    if (!rows.count(i)) p.probs[i] = {zero, one};
  for (std::size_t k = 0; k < inst.m; ++k) {
    p.probs[mbp_gadget_player(inst, k, 1)] = {zero, one};
    p.probs[mbp_gadget_player(inst, k, 3)] = {zero, one};
    p.probs[mbp_gadget_player(inst, k, 4)] = {Scalar(Rational(1 - x)), Scalar(x)};
  }
  auto rep = verify(spec, g, p);
  if (!rep.is_equilibrium())
    throw std::runtime_error("lifted MBP profile fails verification at player " +
                             std::to_string(rep.violation->player));
  out.profile = std::move(p);
  return out;
}

// ---------------------------------------------------------------------------
// Three-player counterexample

inline SchedulingGame three_player_counterexample() {
  SchedulingGame g(3, 2);
  for (std::size_t i = 0; i < 3; ++i) {
    g.set_weight(i, (i + 1) % 3, 0, 0);
    g.set_weight(i, (i + 1) % 3, 1, 1);
    g.set_weight(i, (i + 2) % 3, 0, 2);
    g.set_weight(i, (i + 2) % 3, 1, 3);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Delta thresholds for the SAT game

namespace detail {

inline mpz_class ceil_sqrt(const mpz_class& v) {
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
  if (r * r < v) ++r;
  return r;
}

// Rational lower bound on min{1/sqrt(gamma), 1}, exact for square gamma.
inline Rational inv_sqrt_floor_capped(const Rational& gamma) {
  if (gamma <= 1) return 1;
  mpz_class p = gamma.get_num(), q = gamma.get_den();
  Rational out(q, ceil_sqrt(p * q));
  out.canonicalize();
  return out;
}

}  // namespace detail

struct DeltaThresholds {
  Rational delta_a;  // bounds the risk of the Crawford tail, condition (2/a)
  Rational delta_b;  // keeps the two-value ordering, condition (2/b)
  Rational delta;    // min / 2
};

inline DeltaThresholds delta_thresholds(const ValuationSpec& spec) {
  validate(spec);
  const Rational quarter(1, 4);
  DeltaThresholds t;
  if (const auto* v = std::get_if<VarRisk>(&spec)) {
    t.delta_a = quarter * detail::inv_sqrt_floor_capped(v->gamma);
    t.delta_b = std::min(quarter, Rational(1 / (2 * (1 + v->gamma))));
  } else if (const auto* s = std::get_if<SdRisk>(&spec)) {
    t.delta_a = quarter * std::min(Rational(1 / s->gamma), Rational(1));
    t.delta_b = std::min(quarter, Rational(1 / (2 * (1 + s->gamma))));
  } else if (const auto* c = std::get_if<Combo>(&spec)) {
    t.delta_a = quarter * detail::inv_sqrt_floor_capped(c->gamma);
    t.delta_b = std::min(quarter, Rational(1 / c->gamma));
  } else {
    throw SpecError("no delta threshold for valuation " + describe(spec));
  }
  t.delta = std::min(t.delta_a, t.delta_b) / 2;
  t.delta.canonicalize();
  return t;
}

inline Rational delta_for(const ValuationSpec& spec) { return delta_thresholds(spec).delta; }

// ---------------------------------------------------------------------------
// Payoff game where E - Var does not separate payoff distributions

struct FpCounterexample {
  Game game;  // costs are negated payoffs
  bool negated = true;
  std::vector<Scalar> x1_prime;
  std::vector<Scalar> x1_double_prime;
  std::vector<Scalar> x2;
};

inline FpCounterexample fp_counterexample() {
  const std::vector<std::vector<Scalar>> pay{
      {Scalar::exact(9, 2), Scalar::exact(7, 2), Scalar::exact(0), Scalar::exact(0)},
      {Scalar::exact(0), Scalar::exact(0), Scalar::exact(5), Scalar::exact(15, 4)}};
  std::vector<std::vector<std::string>> labels{{"s1", "s2"}, {"t1", "t2", "t3", "t4"}};
  Game g = Game::from_function(labels, [&](const PureProfile& s) {
    // player 2's payoffs are not part of the example; they are zero
    return std::vector<Scalar>{-pay[s[0]][s[1]], Scalar::exact(0)};
  });
  const Scalar z = Scalar::exact(0), o = Scalar::exact(1);
  return {std::move(g),
          true,
          {o, z},
          {z, o},
          {Scalar::exact(1, 4), Scalar::exact(1, 4), Scalar::exact(1, 10), Scalar::exact(2, 5)}};
}

}  // namespace riskeq
