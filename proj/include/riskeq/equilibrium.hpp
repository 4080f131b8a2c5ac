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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "riskeq/game.hpp"
#include "riskeq/linalg.hpp"
#include "riskeq/scalar.hpp"
#include "riskeq/valuation.hpp"

namespace riskeq {

class BudgetExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

class NotConcaveError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PlayerCheck {
  Scalar value;                          // V_i(p)
  std::vector<Scalar> deviation_values;  // V_i(p_i^l, p_-i) per strategy l
  std::size_t best_deviation = 0;
  Scalar best_value;
  Scalar slack;  // best_value - value
};

struct Violation {
  std::size_t player;
  std::size_t strategy;
  Scalar improvement;  // value - deviation value, > tol
};

struct EquilibriumReport {
  MixedProfile profile;
  std::vector<PlayerCheck> players;  // shorter than n when verification stopped early
  std::optional<Violation> violation;
  Mode mode = Mode::kExact;
  double tol = kDefaultTol;

  bool is_equilibrium() const { return !violation.has_value(); }
};

struct SearchResult {
  std::vector<EquilibriumReport> found;  // sorted by profile_key
  bool exhausted = false;
  std::string candidate_space;
  std::uint64_t candidates_checked = 0;
};

inline std::string profile_key(const MixedProfile& p) {
  std::string key;
  for (std::size_t i = 0; i < p.probs.size(); ++i) {
    if (i) key += '|';
    for (std::size_t l = 0; l < p.probs[i].size(); ++l) {
      if (l) key += ',';
      key += p.probs[i][l].to_string();
    }
  }
  return key;
}

// Worker count: RISKEQ_WORKERS if set, else the available parallelism.
inline unsigned default_workers() {
  if (const char* env = std::getenv("RISKEQ_WORKERS")) {
    try {
      int w = std::stoi(env);
      if (w > 0) return static_cast<unsigned>(w);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Throws when a MomentSum spec is flagged as not asserted concave and the
// random-segment spot check finds a concavity violation.
template <CostGame G>
void require_concave(const ValuationSpec& spec, const G& g, double tol = kDefaultTol) {
  const auto* ms = std::get_if<MomentSum>(&spec);
  if (!ms || ms->asserted_concave) return;
  auto check = spot_check_concavity(spec, g, 200, 0, tol);
  if (!check.passed)
    throw NotConcaveError("moment-sum valuation failed the concavity spot check (worst gap " +
                          std::to_string(check.worst_gap) + ")");
}

namespace detail {

template <CostGame G>
EquilibriumReport verify_in_mode(const ValuationSpec& spec, const G& g, const MixedProfile& p,
                                 Mode m, double tol, bool stop_early) {
  EquilibriumReport rep;
  rep.profile = p;
  rep.mode = m;
  rep.tol = tol;
  const MixedProfile q = p.as(m);
  for (std::size_t i = 0; i < g.num_players(); ++i) {
    PlayerCheck pc;
    pc.value = evaluate(spec, cost_distribution(g, i, q));
    const auto pure_at = support_of(q.probs[i], 0.0);
    for (std::size_t l = 0; l < g.num_strategies(i); ++l) {
      if (pure_at.size() == 1 && pure_at[0] == l)
        pc.deviation_values.push_back(pc.value);
      else
        pc.deviation_values.push_back(evaluate(spec, cost_distribution(g, i, q.with_pure(i, l))));
      if (l == 0 || pc.deviation_values[l] < pc.deviation_values[pc.best_deviation])
        pc.best_deviation = l;
    }
    pc.best_value = pc.deviation_values[pc.best_deviation];
    pc.slack = pc.best_value - pc.value;
    const bool violated = definitely_less(pc.best_value, pc.value, tol);
    if (violated && !rep.violation)
      rep.violation = Violation{i, pc.best_deviation, pc.value - pc.best_value};
    rep.players.push_back(std::move(pc));
    if (violated && stop_early) break;
  }
  return rep;
}

// Exact evaluation when the profile and the game allow it; roots that are not
// perfect powers push the whole check into float mode.
template <CostGame G>
EquilibriumReport verify_unchecked(const ValuationSpec& spec, const G& g, const MixedProfile& p,
                                   double tol, bool stop_early) {
  Mode m = (p.mode() == Mode::kFloat || g.mode() == Mode::kFloat) ? Mode::kFloat : Mode::kExact;
  if (m == Mode::kExact) {
    try {
      return verify_in_mode(spec, g, p, m, tol, stop_early);
    } catch (const InexactRoot&) {
      m = Mode::kFloat;
    }
  }
  return verify_in_mode(spec, g, p, m, tol, stop_early);
}

template <CostGame G>
std::uint64_t count_profiles(const G& g, std::uint64_t budget) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < g.num_players(); ++i) {
    total *= g.num_strategies(i);
    if (total > budget)
      throw BudgetExceeded("pure profile count exceeds budget of " + std::to_string(budget));
  }
  return total;
}

template <CostGame G>
bool advance_profile(const G& g, PureProfile& s) {
  for (std::size_t i = s.size(); i-- > 0;) {
    if (++s[i] < g.num_strategies(i)) return true;
    s[i] = 0;
  }
  return false;
}

// Dense copy of any cost game in the requested mode.
template <CostGame G>
Game materialize(const G& g, Mode m) {
  std::vector<std::vector<std::string>> labels(g.num_players());
  for (std::size_t i = 0; i < g.num_players(); ++i)
    for (std::size_t l = 0; l < g.num_strategies(i); ++l) labels[i].push_back("s" + std::to_string(l + 1));
  return Game::from_function(labels, [&](const PureProfile& s) {
    std::vector<Scalar> c;
    for (std::size_t i = 0; i < s.size(); ++i) c.push_back(Scalar(g.cost(i, s)).as(m));
    return c;
  });
}

inline void sort_found(std::vector<EquilibriumReport>& found) {
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    return profile_key(a.profile) < profile_key(b.profile);
  });
}

}  // namespace detail

// Checks p against every pure unilateral deviation. For valuations concave in
// the player's own mixed strategy this is equivalent to checking all mixed
// deviations. Exact mode compares exactly; float mode flags a violation only
// when a deviation improves by more than tol.
template <CostGame G>
EquilibriumReport verify(const ValuationSpec& spec, const G& g, const MixedProfile& p,
                         double tol = kDefaultTol, bool stop_early = false) {
  validate(spec);
  validate(g, p, tol);
  require_concave(spec, g, tol);
  return detail::verify_unchecked(spec, g, p, tol, stop_early);
}

inline constexpr std::uint64_t kPureBudget = 10'000'000;

// Pure profiles carry no risk, so these are exactly the pure Nash equilibria
// of the cost table; each hit is re-verified under the valuation.
template <CostGame G>
SearchResult pure_equilibria(const ValuationSpec& spec, const G& g, double tol = kDefaultTol,
                             std::uint64_t budget = kPureBudget) {
  validate(spec);
  const std::uint64_t total = detail::count_profiles(g, budget);
  SearchResult res;
  res.candidate_space = "all " + std::to_string(total) + " pure profiles";
  PureProfile s(g.num_players(), 0);
  do {
    ++res.candidates_checked;
    bool stable = true;
    for (std::size_t i = 0; i < g.num_players() && stable; ++i) {
      const Scalar c = g.cost(i, s);
      PureProfile t = s;
      for (std::size_t l = 0; l < g.num_strategies(i) && stable; ++l) {
        if (l == s[i]) continue;
        t[i] = l;
        if (definitely_less(Scalar(g.cost(i, t)), c, tol)) stable = false;
      }
    }
    if (stable) {
      auto rep = detail::verify_unchecked(spec, g, MixedProfile::pure(g, s, g.mode()), tol, false);
      if (rep.is_equilibrium()) res.found.push_back(std::move(rep));
    }
  } while (detail::advance_profile(g, s));
  res.exhausted = true;
  detail::sort_found(res.found);
  return res;
}

// Per player: max - min of E_i(p_i^l, p_-i) over l in the support of p_i.
// Zero for every player iff p has the weak-equilibrium-for-expectation property.
template <CostGame G>
std::vector<Scalar> wee_residual(const ValuationSpec& spec, const G& g, const MixedProfile& p,
                                 double tol = kDefaultTol) {
  validate(spec);
  validate(g, p, tol);
  std::vector<Scalar> out;
  for (std::size_t i = 0; i < g.num_players(); ++i) {
    std::optional<Scalar> lo, hi;
    for (std::size_t l : support_of(p.probs[i], tol)) {
      Scalar e = expectation(g, i, p.with_pure(i, l));
      if (!lo || e < *lo) lo = e;
      if (!hi || e > *hi) hi = e;
    }
    out.push_back(*hi - *lo);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Two-player support enumeration

struct SupportOptions {
  std::size_t max_support_size = 0;  // 0: no limit; a limit leaves the search non-exhaustive
  std::uint64_t max_pairs = 1u << 22;
  std::size_t vertex_cap = 64;
};

namespace detail {

inline std::vector<std::size_t> bits_of(std::uint32_t mask) {
  std::vector<std::size_t> out;
  for (std::size_t b = 0; mask; ++b, mask >>= 1)
    if (mask & 1u) out.push_back(b);
  return out;
}

// Opponent mixtures over `other_support` that make player `me` indifferent (in
// expectation) across `my_support`. Returned vectors are full length.
template <CostGame G>
std::vector<std::vector<Scalar>> indifference_candidates(const G& g, std::size_t me,
                                                         const std::vector<std::size_t>& my_support,
                                                         const std::vector<std::size_t>& other_support,
                                                         std::size_t vertex_cap, double tol,
                                                         bool* truncated = nullptr) {
  const std::size_t other = 1 - me;
  const Mode m = g.mode();
  auto mu = [&](std::size_t mine, std::size_t theirs) {
    PureProfile s(2);
    s[me] = mine;
    s[other] = theirs;
    return Scalar(g.cost(me, s));
  };
  const std::size_t cols = other_support.size();
  linalg::Matrix a;
  std::vector<Scalar> b;
  for (std::size_t r = 1; r < my_support.size(); ++r) {
    std::vector<Scalar> row;
    for (std::size_t t : other_support) row.push_back(mu(my_support[0], t) - mu(my_support[r], t));
    a.push_back(std::move(row));
    b.push_back(Scalar::zero(m));
  }
  a.emplace_back(cols, Scalar::one(m));
  b.push_back(Scalar::one(m));

  auto e = linalg::rref(a, b, tol);
  std::vector<std::vector<Scalar>> local;
  if (!e.consistent) return {};
  if (e.rank == cols) {
    std::vector<Scalar> y(cols);
    for (std::size_t r = 0; r < cols; ++r) y[e.pivots[r]] = e.rows[r][cols];
    for (const auto& v : y)
      if (!is_positive(v, tol)) return {};
    local.push_back(std::move(y));
  } else {
    local = linalg::feasible_vertices(e, cols, vertex_cap, tol);
    // a full list may have been cut short
    if (truncated && local.size() >= vertex_cap) *truncated = true;
    if (local.size() > 1) {
      std::vector<Scalar> c(cols, Scalar::zero(m));
      for (const auto& v : local)
        for (std::size_t j = 0; j < cols; ++j) c[j] += v[j];
      for (auto& x : c) x /= static_cast<long>(local.size());
      local.push_back(std::move(c));
    }
  }
  std::vector<std::vector<Scalar>> out;
  for (auto& y : local) {
    std::vector<Scalar> full(g.num_strategies(other), Scalar::zero(m));
    for (std::size_t j = 0; j < cols; ++j) full[other_support[j]] = y[j];
    out.push_back(std::move(full));
  }
  return out;
}

inline std::uint64_t subsets_up_to(std::size_t n, std::size_t cap) {
  std::uint64_t total = 0, binom = 1;
  for (std::size_t k = 1; k <= n && k <= cap; ++k) {
    binom = binom * (n - k + 1) / k;
    total += binom;
  }
  return total;
}

}  // namespace detail

// For every support pair (T1, T2), each player's conditional expectations must
// agree across its own support; the resulting linear systems in the
// opponent's probabilities give candidates, which are then verified.
template <CostGame G>
SearchResult support_enumeration_2p(const ValuationSpec& spec, const G& g, double tol = kDefaultTol,
                                    const SupportOptions& opt = {}) {
  validate(spec);
  if (g.num_players() != 2) throw std::invalid_argument("support enumeration needs a 2-player game");
  const std::size_t n1 = g.num_strategies(0), n2 = g.num_strategies(1);
  if (n1 > 24 || n2 > 24) throw BudgetExceeded("support enumeration limited to 24 strategies");
  const std::size_t cap = opt.max_support_size ? opt.max_support_size : std::max(n1, n2);
  const std::uint64_t pairs = detail::subsets_up_to(n1, cap) * detail::subsets_up_to(n2, cap);
  if (pairs > opt.max_pairs)
    throw BudgetExceeded(std::to_string(pairs) + " support pairs exceed the cap of " +
                         std::to_string(opt.max_pairs));
  require_concave(spec, g, tol);

  SearchResult res;
  res.candidate_space = std::to_string(pairs) + " support pairs of a " + std::to_string(n1) + "x" +
                        std::to_string(n2) + " game" +
                        (opt.max_support_size ? ", supports up to size " + std::to_string(cap) : "");
  std::set<std::string> seen;
  bool truncated = false;
  for (std::uint32_t m1 = 1; m1 < (1u << n1); ++m1) {
    auto t1 = detail::bits_of(m1);
    if (t1.size() > cap) continue;
    for (std::uint32_t m2 = 1; m2 < (1u << n2); ++m2) {
      auto t2 = detail::bits_of(m2);
      if (t2.size() > cap) continue;
      auto ys = detail::indifference_candidates(g, 0, t1, t2, opt.vertex_cap, tol, &truncated);
      if (ys.empty()) continue;
      auto xs = detail::indifference_candidates(g, 1, t2, t1, opt.vertex_cap, tol, &truncated);
      for (const auto& x : xs)
        for (const auto& y : ys) {
          MixedProfile p{{x, y}};
          if (!seen.insert(profile_key(p)).second) continue;
          ++res.candidates_checked;
          if (detail::verify_unchecked(spec, g, p, tol, true).is_equilibrium())
            res.found.push_back(detail::verify_unchecked(spec, g, p, tol, false));
        }
    }
  }
  res.exhausted = (opt.max_support_size == 0 || cap >= std::max(n1, n2)) && !truncated;
  if (truncated) res.candidate_space += ", vertex cap " + std::to_string(opt.vertex_cap) + " reached";
  detail::sort_found(res.found);
  return res;
}

// ---------------------------------------------------------------------------
// Grid search for n-player games with two strategies each

struct GridOptions {
  std::vector<MixedProfile> extra_candidates;  // verified as given, in their own mode
  unsigned workers = 0;                        // 0: default_workers()
  std::uint64_t max_points = 50'000'000;
};

// Player i puts weight t_i / D on its first strategy, t_i in 0..D with
// D = 1 / resolution. Points are evaluated in float mode.
template <CostGame G>
SearchResult grid_search(const ValuationSpec& spec, const G& g, double resolution, double tol = 1e-3,
                         const GridOptions& opt = {}) {
  validate(spec);
  const std::size_t n = g.num_players();
  for (std::size_t i = 0; i < n; ++i)
    if (g.num_strategies(i) != 2) throw std::invalid_argument("grid search needs 2 strategies per player");
  if (!(resolution > 0 && resolution <= 1)) throw std::invalid_argument("resolution must lie in (0,1]");
  const long d = std::lround(1.0 / resolution);
  if (std::abs(d * resolution - 1.0) > 1e-9)
    throw std::invalid_argument("1/resolution must be an integer");
  std::uint64_t points = 1;
  for (std::size_t i = 0; i < n; ++i) {
    points *= static_cast<std::uint64_t>(d + 1);
    if (points > opt.max_points)
      throw BudgetExceeded("grid of " + std::to_string(d + 1) + "^" + std::to_string(n) +
                           " points exceeds budget of " + std::to_string(opt.max_points));
  }
  require_concave(spec, g, tol);

  // A small float cost table keeps per-point evaluation cheap.
  std::optional<Game> table;
  if (n <= 16) table = detail::materialize(g, Mode::kFloat);

  auto point = [&](std::uint64_t idx) {
    MixedProfile p;
    for (std::size_t i = 0; i < n; ++i) {
      const long t = static_cast<long>(idx % static_cast<std::uint64_t>(d + 1));
      idx /= static_cast<std::uint64_t>(d + 1);
      const double w = static_cast<double>(t) / static_cast<double>(d);
      p.probs.push_back({Scalar::real(w), Scalar::real(1.0 - w)});
    }
    return p;
  };
  auto passes = [&](const MixedProfile& p) {
    if (table) return detail::verify_in_mode(spec, *table, p, Mode::kFloat, tol, true).is_equilibrium();
    return detail::verify_in_mode(spec, g, p, Mode::kFloat, tol, true).is_equilibrium();
  };

  const unsigned workers = opt.workers ? opt.workers : default_workers();
  std::vector<std::uint64_t> hits;
  std::mutex mu;
  auto work = [&](unsigned w) {
    std::vector<std::uint64_t> local;
    for (std::uint64_t idx = w; idx < points; idx += workers)
      if (passes(point(idx))) local.push_back(idx);
    std::lock_guard<std::mutex> lock(mu);
    hits.insert(hits.end(), local.begin(), local.end());
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  std::sort(hits.begin(), hits.end());

  SearchResult res;
  res.candidates_checked = points + opt.extra_candidates.size();
  for (auto idx : hits) res.found.push_back(detail::verify_in_mode(spec, g, point(idx), Mode::kFloat, tol, false));
  for (const auto& c : opt.extra_candidates) {
    auto rep = verify(spec, g, c, c.mode() == Mode::kExact ? kDefaultTol : tol);
    if (rep.is_equilibrium()) res.found.push_back(std::move(rep));
  }
  res.exhausted = true;
  res.candidate_space = "grid with " + std::to_string(d + 1) + " points per player over " +
                        std::to_string(n) + " players (" + std::to_string(points) +
                        " profiles), tol " + Scalar::real(tol).to_string() +
                        (opt.extra_candidates.empty()
                             ? std::string()
                             : ", plus " + std::to_string(opt.extra_candidates.size()) + " seeded candidates");
  detail::sort_found(res.found);
  return res;
}

// ---------------------------------------------------------------------------
// Best-response dynamics on pure profiles

struct DynamicsResult {
  enum class Kind { kConverged, kCycle, kUnknown };
  Kind kind = Kind::kUnknown;
  std::vector<PureProfile> path;   // every visited profile, start first
  std::vector<PureProfile> cycle;  // closed cycle, first == last; empty unless kCycle
  std::size_t steps = 0;
};

inline const char* to_string(DynamicsResult::Kind k) {
  switch (k) {
    case DynamicsResult::Kind::kConverged: return "converged";
    case DynamicsResult::Kind::kCycle: return "cycle";
    default: return "unknown";
  }
}

// Each step, the lowest-index player with a strictly improving pure deviation
// moves to its best response (lowest strategy index among ties). Pure
// profiles carry no risk, so costs decide.
template <CostGame G>
DynamicsResult best_response_dynamics(const ValuationSpec& spec, const G& g, PureProfile start,
                                      std::size_t max_steps = 10'000, double tol = kDefaultTol) {
  validate(spec);
  if (start.size() != g.num_players()) throw DimensionError("start profile length");
  for (std::size_t i = 0; i < start.size(); ++i)
    if (start[i] >= g.num_strategies(i)) throw DimensionError("start strategy out of range");
  DynamicsResult res;
  std::map<PureProfile, std::size_t> visited;
  PureProfile s = std::move(start);
  visited[s] = 0;
  res.path.push_back(s);
  while (res.steps < max_steps) {
    bool moved = false;
    for (std::size_t i = 0; i < g.num_players() && !moved; ++i) {
      PureProfile t = s;
      std::size_t best = s[i];
      Scalar best_cost = Scalar(g.cost(i, s));
      const Scalar current = best_cost;
      for (std::size_t l = 0; l < g.num_strategies(i); ++l) {
        t[i] = l;
        Scalar c = Scalar(g.cost(i, t));
        if (c < best_cost || (c == best_cost && l < best && definitely_less(c, current, tol))) {
          best = l;
          best_cost = c;
        }
      }
      if (best != s[i] && definitely_less(best_cost, current, tol)) {
        s[i] = best;
        moved = true;
      }
    }
    if (!moved) {
      res.kind = DynamicsResult::Kind::kConverged;
      return res;
    }
    ++res.steps;
    res.path.push_back(s);
    auto [it, fresh] = visited.emplace(s, res.path.size() - 1);
    if (!fresh) {
      res.kind = DynamicsResult::Kind::kCycle;
      res.cycle.assign(res.path.begin() + static_cast<std::ptrdiff_t>(it->second), res.path.end());
      return res;
    }
  }
  res.kind = DynamicsResult::Kind::kUnknown;
  return res;
}

}  // namespace riskeq
