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

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "riskeq/equilibrium.hpp"
#include "riskeq/gadgets.hpp"
#include "riskeq/json_io.hpp"
#include "riskeq/random.hpp"
#include "riskeq/scheduling.hpp"
#include "riskeq/valuation.hpp"

namespace riskeq {

// Outcome of one property suite. min_margin is the smallest slack observed
// on the asserted inequalities (negative when violated).
struct PropertyReport {
  std::string name;
  std::string domain;
  bool passed = true;
  std::optional<Json> counterexample;  // first failing case, with inputs and values
  double min_margin = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::size_t skipped = 0;
  Json details = Json::object();

  // Records one asserted case; keeps the first counterexample.
  template <std::invocable MakeCase>
  void check(bool ok, double margin, MakeCase&& make_case) {
    ++samples;
    if (std::isfinite(margin)) min_margin = std::min(min_margin, margin);
    if (!ok) {
      if (passed) counterexample = make_case();
      passed = false;
    }
  }
  void check(bool ok, double margin, const std::string& what) {
    check(ok, margin, [&] { return Json{{"case", what}}; });
  }
};

inline Json to_json(const PropertyReport& r) {
  Json j{{"property", r.name},
         {"domain", r.domain},
         {"passed", r.passed},
         {"samples", r.samples},
         {"skipped", r.skipped},
         {"seed", r.seed},
         {"min_margin", std::isfinite(r.min_margin) ? Json(r.min_margin) : Json(nullptr)},
         {"details", r.details}};
  j["counterexample"] = r.counterexample ? *r.counterexample : Json(nullptr);
  return j;
}

namespace detail {

// Value in exact mode when roots are exact, float otherwise.
template <CostGame G>
Scalar value_auto(const ValuationSpec& spec, const G& g, std::size_t i, const MixedProfile& p) {
  if (p.mode() == Mode::kExact && g.mode() == Mode::kExact) {
    try {
      return valuation(spec, g, i, p);
    } catch (const InexactRoot&) {
    }
  }
  return valuation(spec, g, i, p.as(Mode::kFloat));
}

// Positive margin of "a > b" (strictly, beyond tol in float mode).
inline double strict_margin(const Scalar& a, const Scalar& b) { return (a - b).to_double(); }
inline bool strictly_greater(const Scalar& a, const Scalar& b, double tol) {
  if (a.is_exact() && b.is_exact()) return a > b;
  return a.to_double() - b.to_double() > tol;
}

inline std::vector<Scalar> as_mode(std::vector<Scalar> v, Mode m) {
  for (auto& x : v) x = x.as(m);
  return v;
}

inline Json row_json(const std::vector<Scalar>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

}  // namespace detail

// Game where player 0 (one strategy) pays a when player 1 plays "lo" and b
// when it plays "hi". With player 1 at <1-q, q> player 0 faces the two-value
// distribution (a, b, q).
inline Game two_value_game(const Scalar& a, const Scalar& b) {
  std::vector<std::vector<std::string>> labels{{"x"}, {"lo", "hi"}};
  const Scalar z = Scalar::zero(a.mode());
  return Game(labels, {a, z, b, z});
}

inline MixedProfile two_value_profile(const Scalar& q) { return MixedProfile{{{Scalar::one(q.mode())}, {1 - q, q}}}; }

// ---------------------------------------------------------------------------

// R >= -tol on random profiles; R vanishes exactly when the player's cost is
// constant over the support, on the random samples, on pure profiles, and on
// two-value constructions.
template <CostGame G>
PropertyReport check_risk_positivity(const ValuationSpec& spec, const G& g, std::size_t samples = 500,
                                     std::uint64_t seed = 0, double tol = kDefaultTol) {
  validate(spec);
  PropertyReport rep;
  rep.name = "risk-positivity";
  rep.domain = describe(spec) + ", " + std::to_string(samples) + " random profiles plus pure and two-value cases";
  rep.seed = seed;
  Rng rng(seed);
  const Mode m = needs_roots(spec) ? Mode::kFloat : g.mode();
  const bool has_risk_term = !std::holds_alternative<Expectation>(spec);
  if (!has_risk_term) rep.details["note"] = "R is identically 0 for the expectation; only R >= 0 is checked";

  auto assess = [&](const auto& game, std::size_t i, const MixedProfile& p, const std::string& origin) {
    auto d = cost_distribution(game, i, p);
    bool constant = true;
    for (const auto& o : d) constant = constant && o.cost == d.front().cost;
    Scalar r = evaluate(spec, d) - expectation_of(d);
    auto make = [&] {
      Json c{{"origin", origin}, {"valuation", describe(spec)}, {"player", i},
             {"profile", to_json(p)["probabilities"]}, {"risk", to_json(r)}, {"support_constant", constant}};
      if constexpr (std::is_same_v<std::decay_t<decltype(game)>, Game>) c["game"] = to_json(game);
      return c;
    };
    // (C.1) nonnegativity
    rep.check(!definitely_less(r, Scalar::zero(r.mode()), tol), r.to_double() + tol, make);
    // (C.2) zero iff constant; the plain expectation has no risk term to test
    if (!has_risk_term) return;
    if (constant)
      rep.check(approx_equal(r, Scalar::zero(r.mode()), tol), tol - std::abs(r.to_double()), make);
    else
      rep.check(is_positive(r, tol), r.to_double() - (r.is_exact() ? 0.0 : tol), make);
  };

  for (std::size_t t = 0; t < samples; ++t) {
    MixedProfile p = random_profile(rng, g).as(m);
    assess(g, t % g.num_players(), p, "random profile");
  }
  PureProfile s(g.num_players(), 0);
  for (std::size_t t = 0; t < 8; ++t) {
    for (std::size_t i = 0; i < s.size(); ++i)
      s[i] = std::uniform_int_distribution<std::size_t>(0, g.num_strategies(i) - 1)(rng);
    assess(g, t % g.num_players(), MixedProfile::pure(g, s, m), "pure profile");
  }
  for (std::size_t t = 0; t < 20; ++t) {
    Scalar a = Scalar::exact(std::uniform_int_distribution<long>(0, 5)(rng));
    Scalar b = a + Scalar::exact(std::uniform_int_distribution<long>(1, 5)(rng));
    Game tv = two_value_game(a, b);
    assess(tv, 0, two_value_profile(random_open_unit(rng, 20)).as(m), "two-value game");
  }
  return rep;
}

// Strict concavity of V_i along segments whose endpoints differ in expectation.
template <CostGame G>
PropertyReport check_e_strict_concavity(const ValuationSpec& spec, const G& g, std::size_t i,
                                        std::size_t trials = 500, std::uint64_t seed = 0,
                                        double tol = kDefaultTol) {
  validate(spec);
  if (!std::holds_alternative<VarRisk>(spec) && !std::holds_alternative<SdRisk>(spec) &&
      !std::holds_alternative<Combo>(spec))
    throw SpecError("E-strict concavity is checked for e+var, e+sd and combo valuations");
  PropertyReport rep;
  rep.name = "e-strict-concavity";
  rep.domain = describe(spec) + ", player " + std::to_string(i) + ", " + std::to_string(trials) + " segments";
  rep.seed = seed;
  Rng rng(seed);
  const Mode m = needs_roots(spec) ? Mode::kFloat : g.mode();
  for (std::size_t t = 0; t < trials; ++t) {
    MixedProfile base = random_profile(rng, g).as(m);
    auto p1 = random_simplex(rng, g.num_strategies(i));
    auto p2 = random_simplex(rng, g.num_strategies(i));
    MixedProfile a = base.with_strategy(i, detail::as_mode(p1, m));
    MixedProfile b = base.with_strategy(i, detail::as_mode(p2, m));
    Scalar e1 = expectation(g, i, a), e2 = expectation(g, i, b);
    if (std::abs((e1 - e2).to_double()) <= 10 * tol) {
      ++rep.skipped;  // condition is vacuous
      continue;
    }
    Scalar lam = random_open_unit(rng, 20);
    std::vector<Scalar> mix;
    for (std::size_t l = 0; l < p1.size(); ++l) mix.push_back(lam * p1[l] + (1 - lam) * p2[l]);
    Scalar lm = lam.as(m);
    Scalar v1 = valuation(spec, g, i, a), v2 = valuation(spec, g, i, b);
    Scalar vm = valuation(spec, g, i, base.with_strategy(i, detail::as_mode(mix, m)));
    Scalar chord = lm * v1 + (1 - lm) * v2;
    rep.check(detail::strictly_greater(vm, chord, tol), detail::strict_margin(vm, chord), [&] {
      return Json{{"valuation", describe(spec)}, {"player", i}, {"base", to_json(base)["probabilities"]},
                  {"p_prime", detail::row_json(p1)}, {"p_double_prime", detail::row_json(p2)},
                  {"lambda", to_json(lam)}, {"v_mix", to_json(vm)}, {"chord", to_json(chord)}};
    });
  }
  return rep;
}

// wee_residual vanishes at verified equilibria (exactly in exact mode, within
// c * tol otherwise).
template <CostGame G>
PropertyReport check_wee_at_equilibria(const ValuationSpec& spec, const G& g,
                                       const std::vector<MixedProfile>& equilibria, double tol = kDefaultTol,
                                       double c = 10.0) {
  PropertyReport rep;
  rep.name = "wee-at-equilibria";
  rep.domain = describe(spec) + ", " + std::to_string(equilibria.size()) + " equilibria, bound " +
               std::to_string(c) + " * tol";
  rep.details["c"] = c;
  for (const auto& p : equilibria) {
    auto res = wee_residual(spec, g, p, tol);
    for (std::size_t i = 0; i < res.size(); ++i) {
      const double bound = res[i].is_exact() ? 0.0 : c * tol;
      const bool ok = res[i].is_exact() ? res[i].is_zero() : std::abs(res[i].to_double()) <= bound;
      rep.check(ok, bound - std::abs(res[i].to_double()), [&] {
        return Json{{"profile", to_json(p)["probabilities"]}, {"player", i}, {"residual", to_json(res[i])}};
      });
    }
  }
  return rep;
}

// At equilibria of ordered-links games, every mixed player has only pure
// neighbours among the players it weighs positively on link 1.
inline PropertyReport check_mphpn(const ValuationSpec& spec, const SchedulingGame& g,
                                  const std::vector<MixedProfile>& equilibria, double tol = kDefaultTol) {
  validate(spec);
  if (!std::holds_alternative<VarRisk>(spec) && !std::holds_alternative<SdRisk>(spec) &&
      !std::holds_alternative<MomentSum>(spec))
    throw SpecError("MPHPN is checked for e+var, e+sd and moment-sum valuations");
  if (!check_ordered_links(g).ordered) throw std::invalid_argument("MPHPN needs two ordered links");
  PropertyReport rep;
  rep.name = "mphpn";
  rep.domain = describe(spec) + ", " + std::to_string(equilibria.size()) + " profiles of a " +
               std::to_string(g.num_players()) + "-player game";
  for (const auto& p : equilibria) {
    check_dimensions(g, p);
    for (std::size_t i = 0; i < g.num_players(); ++i) {
      if (is_pure(p.probs[i], tol)) {
        rep.check(true, 0.0, "");
        continue;
      }
      std::optional<std::size_t> bad;
      for (std::size_t o = 0; o < g.num_players() && !bad; ++o)
        if (o != i && g.weight(i, o, 0) != 0 && !is_pure(p.probs[o], tol)) bad = o;
      rep.check(!bad, bad ? -1.0 : 0.0, [&] {
        return Json{{"profile", to_json(p)["probabilities"]}, {"mixed_player", g.player_names()[i]},
                    {"mixed_neighbour", g.player_names()[*bad]}};
      });
    }
  }
  return rep;
}

// V_i stays constant over mixtures supported inside sigma(p_i).
template <CostGame G>
PropertyReport check_optimal_value(const ValuationSpec& spec, const G& g, std::size_t i, const MixedProfile& p,
                                   std::size_t samples = 20, std::uint64_t seed = 0, double tol = kDefaultTol) {
  validate(spec);
  PropertyReport rep;
  rep.name = "optimal-value";
  rep.domain = describe(spec) + ", player " + std::to_string(i) + ", " + std::to_string(samples) +
               " mixtures inside the support";
  rep.seed = seed;
  Rng rng(seed);
  const auto sup = support_of(p.probs[i], tol);
  const Scalar v0 = detail::value_auto(spec, g, i, p);
  if (sup.size() == 1) {
    rep.details["vacuous"] = true;
    return rep;
  }
  for (std::size_t t = 0; t < samples; ++t) {
    auto w = random_simplex(rng, sup.size(), true);
    std::vector<Scalar> q(g.num_strategies(i), Scalar::zero(p.mode()));
    for (std::size_t k = 0; k < sup.size(); ++k) q[sup[k]] = w[k].as(p.mode());
    Scalar v = detail::value_auto(spec, g, i, p.with_strategy(i, q));
    const bool exact = v.is_exact() && v0.is_exact();
    const double diff = exact ? (v - v0).to_double() : v.to_double() - v0.to_double();
    const bool ok = exact ? v == v0 : std::abs(diff) <= 10 * tol;
    rep.check(ok, (exact ? 0.0 : 10 * tol) - std::abs(diff), [&] {
      return Json{{"player", i}, {"mixture", detail::row_json(q)}, {"value", to_json(v)}, {"reference", to_json(v0)}};
    });
  }
  return rep;
}

// (2/a) R(1, 1+2 delta, q) < 1/2 on a q-grid; (2/b) V(1, 1+2 delta, r) < V(1, 2, q)
// for 0 <= r <= q, 0 < q < 1 on a 2-D grid. Grid steps are 1/steps_a and 1/steps_b.
inline PropertyReport check_conditions_2ab(const ValuationSpec& spec, const Rational& delta, long steps_a = 1000,
                                           long steps_b = 100, double tol = kDefaultTol) {
  validate(spec);
  PropertyReport rep;
  rep.name = "conditions-2ab";
  rep.domain = describe(spec) + ", delta " + delta.get_str() + ", q step 1/" + std::to_string(steps_a) +
               ", (r,q) step 1/" + std::to_string(steps_b);
  const Mode m = needs_roots(spec) ? Mode::kFloat : Mode::kExact;
  const Scalar one = Scalar::one(m), two = Scalar::from_int(2, m);
  const Scalar hi = (1 + 2 * Scalar(delta)).as(m);
  const Scalar half = Scalar::exact(1, 2).as(m);
  std::optional<Scalar> max_r;
  double margin_a = std::numeric_limits<double>::infinity();
  for (long t = 0; t <= steps_a; ++t) {
    Scalar q = Scalar::exact(t, steps_a).as(m);
    Scalar r = two_value_R(spec, {one, hi, q});
    if (!max_r || r > *max_r) max_r = r;
    margin_a = std::min(margin_a, detail::strict_margin(half, r));
    rep.check(detail::strictly_greater(half, r, tol), detail::strict_margin(half, r), [&] {
      return Json{{"condition", "2/a"}, {"q", to_json(q)}, {"risk", to_json(r)}, {"delta", delta.get_str()}};
    });
  }
  double margin_b = std::numeric_limits<double>::infinity();
  std::vector<Scalar> low(steps_b + 1);
  for (long t = 0; t <= steps_b; ++t) low[t] = two_value_V(spec, {one, hi, Scalar::exact(t, steps_b).as(m)});
  for (long tq = 1; tq < steps_b; ++tq) {
    Scalar q = Scalar::exact(tq, steps_b).as(m);
    Scalar vq = two_value_V(spec, {one, two, q});
    for (long tr = 0; tr <= tq; ++tr) {
      margin_b = std::min(margin_b, detail::strict_margin(vq, low[tr]));
      rep.check(detail::strictly_greater(vq, low[tr], tol), detail::strict_margin(vq, low[tr]), [&] {
        return Json{{"condition", "2/b"}, {"q", to_json(q)}, {"r", Json(Scalar::exact(tr, steps_b).to_string())},
                    {"v_low", to_json(low[tr])}, {"v_high", to_json(vq)}, {"delta", delta.get_str()}};
      });
    }
  }
  rep.details["max_risk_2a"] = to_json(*max_r);
  rep.details["margin_2a"] = margin_a;
  rep.details["margin_2b"] = margin_b;
  return rep;
}

// Risk part R(d, q) of the two-value distribution {0, d} (expectation term
// removed) is nondecreasing in d and symmetric under q <-> 1-q.
inline PropertyReport check_two_values_monotonicity(const ValuationSpec& spec, long d_max = 8, long d_steps = 4,
                                                    long q_steps = 100, double tol = kDefaultTol) {
  validate(spec);
  if (!std::holds_alternative<VarRisk>(spec) && !std::holds_alternative<SdRisk>(spec) &&
      !std::holds_alternative<MomentSum>(spec))
    throw SpecError("two-values monotonicity is checked for e+var, e+sd and moment-sum valuations");
  PropertyReport rep;
  rep.name = "two-values-monotonicity";
  rep.domain = describe(spec) + ", d in [0," + std::to_string(d_max) + "] step 1/" + std::to_string(d_steps) +
               ", q step 1/" + std::to_string(q_steps);
  const Mode m = needs_roots(spec) ? Mode::kFloat : Mode::kExact;
  const Rational a0 = std::holds_alternative<MomentSum>(spec) ? std::get<MomentSum>(spec).alpha0 : Rational(1);
  auto risk = [&](const Scalar& d, const Scalar& q) {
    return two_value_R(spec, {Scalar::zero(m), d, q}) - (Scalar(a0).as(m) - 1) * q * d;
  };
  for (long tq = 0; tq <= q_steps; ++tq) {
    Scalar q = Scalar::exact(tq, q_steps).as(m);
    Scalar q1 = (1 - Scalar::exact(tq, q_steps)).as(m);
    std::optional<Scalar> prev;
    for (long td = 0; td <= d_max * d_steps; ++td) {
      Scalar d = Scalar::exact(td, d_steps).as(m);
      Scalar r = risk(d, q), rs = risk(d, q1);
      if (prev) {
        const double margin = (r - *prev).to_double() + (r.is_exact() ? 0.0 : tol);
        rep.check(!definitely_less(r, *prev, tol), margin, [&] {
          return Json{{"kind", "monotone in d"}, {"q", to_json(q)}, {"d", to_json(d)}, {"risk", to_json(r)},
                      {"previous", to_json(*prev)}};
        });
      }
      rep.check(approx_equal(r, rs, tol), (r.is_exact() ? 0.0 : tol) - std::abs((r - rs).to_double()), [&] {
        return Json{{"kind", "symmetric in q"}, {"q", to_json(q)}, {"d", to_json(d)}, {"risk", to_json(r)},
                    {"mirrored", to_json(rs)}};
      });
      prev = r;
    }
  }
  return rep;
}

// Identities of f(x, j) on an exact x-grid of step 1/steps, j = 0..max_j.
inline PropertyReport check_f_identities(long steps = 100, unsigned max_j = 12) {
  PropertyReport rep;
  rep.name = "f-identities";
  rep.domain = "x in [0,1] step 1/" + std::to_string(steps) + ", j in 0.." + std::to_string(max_j);
  auto ce = [](const char* what, const Scalar& x, unsigned j, const Scalar& v) {
    return [=] { return Json{{"identity", what}, {"x", to_json(x)}, {"j", j}, {"f", to_json(v)}}; };
  };
  for (long t = 0; t <= steps; ++t) {
    const Scalar x = Scalar::exact(t, steps), x1 = 1 - x;
    const bool interior = t > 0 && t < steps;
    for (unsigned j = 0; j <= max_j; ++j) {
      const Scalar v = f(x, j), vm = f(x1, j);
      if (j == 0) rep.check(v == 1, 0.0, ce("f(x,0) = 1", x, j, v));
      if (j == 1) rep.check(v.is_zero(), 0.0, ce("f(x,1) = 0", x, j, v));
      if (j >= 1 && !interior) rep.check(v.is_zero(), 0.0, ce("f(0,j) = f(1,j) = 0 for j >= 1", x, j, v));
      if (j >= 2 && j % 2 == 0) {
        rep.check(v == vm, 0.0, ce("f(x,j) = f(1-x,j) for even j", x, j, v));
        if (interior) rep.check(v.sign() > 0, v.to_double(), ce("f(x,j) > 0 for even j", x, j, v));
      }
      if (j >= 3 && j % 2 == 1) {
        rep.check(v == -vm, 0.0, ce("f(x,j) = -f(1-x,j) for odd j", x, j, v));
        if (interior) {
          const int want = 2 * t < steps ? 1 : (2 * t == steps ? 0 : -1);
          rep.check(v.sign() == want, std::abs(v.to_double()), ce("sign of f(x,j) around 1/2 for odd j", x, j, v));
        }
      }
    }
  }
  rep.details["f(0,0)"] = to_json(f(Scalar::exact(0), 0));
  rep.details["note"] = "f(0,0) = f(1,0) = 1 by the definition; the vanishing identity is checked for j >= 1";
  return rep;
}

// F(y) increasing on a y-grid over [0, y_max] with step h (float, relative
// margin 1e-12), and f(x,r-1) f(x,r+1) > f(x,r)^2 for odd r on an exact x-grid.
inline PropertyReport check_embracing_and_geometric(double h = 1e-4, double y_max = 5.0, long x_steps = 100) {
  PropertyReport rep;
  rep.name = "embracing-and-geometric";
  rep.domain = "(r,s) in {3,5,7}^2, y in [0," + Scalar::real(y_max).to_string() + "] step " +
               Scalar::real(h).to_string() + "; odd r in {3,5,7}, x step 1/" + std::to_string(x_steps);
  struct Params {
    Rational p, q, w, alpha, beta;
  };
  const std::vector<Params> params{
      {Rational(3, 10), Rational(7, 10), 1, 1, 1},
      {Rational(1, 10), Rational(9, 10), 2, 1, 1},
      {Rational(1, 4), Rational(3, 5), 1, Rational(1, 2), 1},  // alpha * beta = 1/2
      {Rational(2, 5), Rational(4, 5), 3, 2, Rational(1, 4)},  // alpha * beta = 1/2
      {Rational(1, 20), Rational(11, 20), Rational(1, 2), 3, 5},
  };
  const long points = std::lround(y_max / h);
  for (unsigned r : {3u, 5u, 7u})
    for (unsigned s : {3u, 5u, 7u})
      for (const auto& pr : params) {
        auto F = [&](double y) {
          return embracing_F(r, s, Scalar(pr.p).as(Mode::kFloat), Scalar(pr.q).as(Mode::kFloat),
                             Scalar(pr.w).as(Mode::kFloat), Scalar(pr.alpha).as(Mode::kFloat),
                             Scalar(pr.beta).as(Mode::kFloat), Scalar::real(y))
              .to_double();
        };
        double prev = F(0.0);
        double worst = std::numeric_limits<double>::infinity();
        std::optional<double> bad_y;
        for (long t = 1; t <= points; ++t) {
          const double y = t * h;
          const double cur = F(y);
          const double slack = (cur - prev) - 1e-12 * (std::abs(cur) + std::abs(prev));
          const double rel = slack / std::max(std::abs(cur), std::numeric_limits<double>::min());
          worst = std::min(worst, rel);
          if (slack <= 0 && !bad_y) bad_y = y;
          prev = cur;
        }
        rep.check(!bad_y, worst, [&] {
          return Json{{"property", "embracing"}, {"r", r}, {"s", s}, {"p", pr.p.get_str()}, {"q", pr.q.get_str()},
                      {"w", pr.w.get_str()}, {"alpha", pr.alpha.get_str()}, {"beta", pr.beta.get_str()},
                      {"y", *bad_y}, {"h", h}};
        });
      }
  for (unsigned r : {3u, 5u, 7u})
    for (long t = 1; t < x_steps; ++t) {
      const Scalar x = Scalar::exact(t, x_steps);
      const Scalar lhs = f(x, r - 1) * f(x, r + 1), rhs = f(x, r).pow(2);
      rep.check(lhs > rhs, detail::strict_margin(lhs, rhs), [&] {
        return Json{{"property", "geometric mean"}, {"r", r}, {"x", to_json(x)}, {"lhs", to_json(lhs)},
                    {"rhs", to_json(rhs)}};
      });
    }
  return rep;
}

// Variance of player 0's cost at p_0 = <x, 1-x>, p_1 = <2/3, 1/3>.
inline Rational crawford_candidate_variance(const Rational& delta, const Rational& x) {
  return Rational(2 * delta * delta / 3) * Rational(Rational(4, 3) - x);
}

// Pure enumeration, exhaustive support enumeration, the WEE-forced candidate,
// and a grid all fail to produce an equilibrium.
inline PropertyReport check_crawford_nonexistence(const ValuationSpec& spec, const Rational& delta,
                                                  double resolution = 0.01, double grid_tol = 1e-3,
                                                  double tol = kDefaultTol) {
  validate(spec);
  PropertyReport rep;
  rep.name = "crawford-nonexistence";
  rep.domain = describe(spec) + ", delta " + delta.get_str() + ", grid resolution " +
               Scalar::real(resolution).to_string();
  const Game g = crawford(delta);
  const std::string shorthand = describe(spec);

  auto pure = pure_equilibria(spec, g, tol);
  rep.check(pure.found.empty(), pure.found.empty() ? 0.0 : -1.0, [&] { return Json{{"stage", "pure"}, {"search", to_json(pure)}}; });

  auto sup = support_enumeration_2p(spec, g, tol);
  rep.check(sup.found.empty() && sup.exhausted, sup.found.empty() ? 0.0 : -1.0,
            [&] { return Json{{"stage", "support enumeration"}, {"search", to_json(sup)}}; });
  rep.details["support_pairs"] = sup.candidate_space;

  // WEE pins both players to <2/3, 1/3>
  const Scalar y = Scalar::exact(2, 3);
  MixedProfile cand{{{y, 1 - y}, {y, 1 - y}}};
  auto wee = wee_residual(spec, g, cand, tol);
  bool wee_zero = true;
  for (const auto& r : wee) wee_zero = wee_zero && r.is_zero();
  rep.check(wee_zero, 0.0, [&] { return Json{{"stage", "wee candidate residual"}, {"profile", to_json(cand)["probabilities"]}}; });
  auto vr = verify(spec, g, cand, tol);
  rep.check(!vr.is_equilibrium(), vr.violation ? vr.violation->improvement.to_double() : -1.0,
            [&] { return Json{{"stage", "wee candidate verify"}, {"report", to_json(vr)}}; });
  if (vr.violation)
    rep.details["candidate_violation"] = Json{{"player", vr.violation->player},
                                              {"strategy", g.label(vr.violation->player, vr.violation->strategy)},
                                              {"improvement", to_json(vr.violation->improvement)}};

  if (std::holds_alternative<VarRisk>(spec)) {
    Json samples = Json::array();
    for (const Rational& x : {Rational(0), Rational(1, 3), Rational(3, 4)}) {
      MixedProfile p{{{Scalar(x), Scalar(Rational(1 - x))}, {y, 1 - y}}};
      Scalar var = k_moment(g, 0, p, 2);
      Rational want = crawford_candidate_variance(delta, x);
      rep.check(var == Scalar(want), 0.0, [&] {
        return Json{{"stage", "variance formula"}, {"x", x.get_str()}, {"variance", to_json(var)}, {"formula", want.get_str()}};
      });
      samples.push_back(Json{{"x", x.get_str()}, {"variance", to_json(var)}});
    }
    rep.details["variance_samples"] = std::move(samples);
  }

  auto grid = grid_search(spec, g, resolution, grid_tol);
  rep.check(grid.found.empty(), grid.found.empty() ? 0.0 : -1.0,
            [&] { return Json{{"stage", "grid"}, {"search", to_json(grid)}}; });
  return rep;
}

// FP counterexample payoff game: equal mean and second moment on both rows, so
// V = E - Var is constant along the segment between two different payoff
// distributions.
inline PropertyReport check_fp_counterexample() {
  PropertyReport rep;
  rep.name = "fp-counterexample";
  rep.domain = "FP counterexample payoff game, exact mode, lambda in {0, 1/10, ..., 1}";
  const auto fp = fp_counterexample();
  const MixedProfile a{{fp.x1_prime, fp.x2}}, b{{fp.x1_double_prime, fp.x2}};
  // payoff = -cost
  auto payoff_dist = [&](const MixedProfile& p) {
    auto d = cost_distribution(fp.game, 0, p);
    std::map<Rational, Rational> out;
    for (const auto& o : d) out[(-o.cost).rational()] += o.prob.rational();
    return out;
  };
  auto mean = [&](const MixedProfile& p) { return -expectation(fp.game, 0, p); };
  auto second = [&](const MixedProfile& p) {
    Scalar acc = Scalar::exact(0);
    for (const auto& o : cost_distribution(fp.game, 0, p)) acc += o.prob * o.cost * o.cost;
    return acc;
  };
  auto v_payoff = [&](const MixedProfile& p) { return mean(p) - k_moment(fp.game, 0, p, 2); };

  const auto da = payoff_dist(a), db = payoff_dist(b);
  rep.check(da != db, 0.0, "payoff distributions coincide");
  for (const auto* p : {&a, &b}) {
    Scalar e = mean(*p), s2 = second(*p);
    rep.check(e == Scalar::exact(2), 0.0, [&] { return Json{{"quantity", "E"}, {"value", to_json(e)}}; });
    rep.check(s2 == Scalar::exact(65, 8), 0.0, [&] { return Json{{"quantity", "second moment"}, {"value", to_json(s2)}}; });
  }
  const Scalar v0 = v_payoff(a);
  for (long t = 0; t <= 10; ++t) {
    Scalar lam = Scalar::exact(t, 10);
    std::vector<Scalar> x1{lam, 1 - lam};
    Scalar v = v_payoff(MixedProfile{{x1, fp.x2}});
    rep.check(v == v0, 0.0, [&] { return Json{{"quantity", "E - Var along segment"}, {"lambda", to_json(lam)}, {"value", to_json(v)}, {"reference", to_json(v0)}}; });
  }
  Json dist = Json::object();
  for (const auto& [k, v] : da) dist[k.get_str()] = v.get_str();
  rep.details["payoff_distribution_x1_prime"] = std::move(dist);
  rep.details["E_minus_Var"] = to_json(v0);
  return rep;
}

// Partition-polynomial moments against brute-force central moments on random
// scheduling games (n in 2..max_players, two links, weights in 0..max_weight).
inline PropertyReport check_moment_formula(std::size_t instances = 200, std::uint64_t seed = 0,
                                           std::size_t max_players = 4, long max_weight = 5,
                                           std::vector<unsigned> ks = {0, 1, 2, 4, 6, 8}) {
  PropertyReport rep;
  rep.name = "moment-formula";
  rep.domain = std::to_string(instances) + " random scheduling games, n <= " + std::to_string(max_players) +
               ", m = 2, weights <= " + std::to_string(max_weight);
  rep.seed = seed;
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> nd(2, max_players);
  std::uniform_int_distribution<long> wd(0, max_weight);
  for (std::size_t t = 0; t < instances; ++t) {
    const std::size_t n = nd(rng);
    SchedulingGame g(n, 2);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t o = 0; o < n; ++o)
        for (std::size_t l = 0; l < 2; ++l) g.set_weight(i, o, l, wd(rng));  // self-weights shift the cost only
    const Game ng = to_normal_form(g);
    MixedProfile p = random_profile(rng, g);
    const std::size_t i = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    const std::size_t link = std::uniform_int_distribution<std::size_t>(0, 1)(rng);
    MixedProfile fixed = p.with_pure(i, link);
    for (unsigned k : ks) {
      Scalar lhs = k_moment_formula(g, i, link, fixed, k);
      Scalar rhs = k_moment(ng, i, fixed, k);
      rep.check(lhs == rhs, 0.0, [&] {
        return Json{{"game", to_json(g)}, {"player", i}, {"link", link}, {"k", k},
                    {"profile", to_json(fixed)["probabilities"]}, {"formula", to_json(lhs)},
                    {"definition", to_json(rhs)}};
      });
    }
  }
  return rep;
}

}  // namespace riskeq
