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

#include <limits>
#include <map>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "riskeq/game.hpp"
#include "riskeq/random.hpp"
#include "riskeq/scalar.hpp"

namespace riskeq {

// Valuation variants. Every one has the form V = E + R with R >= 0 (MomentSum
// with alpha0 = 1); parameters are exact rationals.
struct Expectation {};
struct VarRisk {
  Rational gamma{1};
};
struct SdRisk {
  Rational gamma{1};
};
struct MomentSum {
  std::map<unsigned, Rational> alpha;  // even k in {2,4,6,8}
  Rational alpha0{1};
  // Concavity in the own mixed strategy cannot be decided from alpha; when
  // false, equilibrium verification spot-checks it first.
  bool asserted_concave = true;
};
struct NuPower {
  unsigned r = 2;
};
struct Combo {
  Rational lambda{1, 2};
  Rational gamma{1};
  unsigned r = 2;
};

using ValuationSpec = std::variant<Expectation, VarRisk, SdRisk, MomentSum, NuPower, Combo>;

class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void validate(const ValuationSpec& spec) {
  std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, VarRisk> || std::is_same_v<T, SdRisk>) {
          if (v.gamma <= 0) throw SpecError("gamma must be positive");
        } else if constexpr (std::is_same_v<T, MomentSum>) {
          if (v.alpha0 < 0) throw SpecError("alpha0 must be nonnegative");
          for (const auto& [k, a] : v.alpha) {
            if (k < 2 || k > 8 || k % 2 != 0) throw SpecError("moment orders must be in {2,4,6,8}");
            if (a < 0) throw SpecError("moment weights must be nonnegative");
          }
        } else if constexpr (std::is_same_v<T, NuPower>) {
          if (v.r < 2) throw SpecError("nu exponent r must be >= 2");
        } else if constexpr (std::is_same_v<T, Combo>) {
          if (v.lambda <= 0 || v.lambda > 1) throw SpecError("lambda must lie in (0,1]");
          if (v.gamma <= 0) throw SpecError("gamma must be positive");
          if (v.r < 2) throw SpecError("nu exponent r must be >= 2");
        }
      },
      spec);
}

// Shorthand form accepted by the CLI, e.g. "e+var:gamma=1".
inline std::string describe(const ValuationSpec& spec) {
  std::ostringstream os;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Expectation>) {
          os << "e";
        } else if constexpr (std::is_same_v<T, VarRisk>) {
          os << "e+var:gamma=" << v.gamma.get_str();
        } else if constexpr (std::is_same_v<T, SdRisk>) {
          os << "e+sd:gamma=" << v.gamma.get_str();
        } else if constexpr (std::is_same_v<T, MomentSum>) {
          os << "moments:a0=" << v.alpha0.get_str();
          for (const auto& [k, a] : v.alpha) os << ",a" << k << "=" << a.get_str();
        } else if constexpr (std::is_same_v<T, NuPower>) {
          os << "nu:r=" << v.r;
        } else {
          os << "combo:lambda=" << v.lambda.get_str() << ",gamma=" << v.gamma.get_str()
             << ",r=" << v.r;
        }
      },
      spec);
  return os.str();
}

// True when evaluating the valuation takes square or r-th roots, which exact mode
// supports only for perfect powers.
inline bool needs_roots(const ValuationSpec& spec) {
  if (std::holds_alternative<SdRisk>(spec) || std::holds_alternative<NuPower>(spec)) return true;
  if (const auto* c = std::get_if<Combo>(&spec)) return c->lambda != 1;
  return false;
}

inline bool uses_nu(const ValuationSpec& spec) {
  return std::holds_alternative<NuPower>(spec) ||
         (std::holds_alternative<Combo>(spec) && std::get<Combo>(spec).lambda != 1);
}

// ---------------------------------------------------------------------------
// Cost distributions

struct Outcome {
  Scalar prob;
  Scalar cost;
};

// Mode used to evaluate g under p: the profile's mode, with exact costs
// rounded into float when p is float. Float costs under an exact profile are
// a mode error.
template <CostGame G>
Mode evaluation_mode(const G& g, const MixedProfile& p) {
  Mode pm = p.mode();
  if (pm == Mode::kExact && g.mode() == Mode::kFloat)
    throw ModeError("exact profile on a float-cost game; convert one of them");
  return pm;
}

// Player i's cost distribution under p, one entry per profile with p(s) > 0.
template <CostGame G>
std::vector<Outcome> cost_distribution(const G& g, std::size_t i, const MixedProfile& p) {
  check_dimensions(g, p);
  const Mode m = evaluation_mode(g, p);
  const std::size_t n = g.num_players();
  std::vector<std::vector<std::size_t>> sets(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = 0; l < p.probs[j].size(); ++l)
      if (p.probs[j][l].sign() > 0) sets[j].push_back(l);
  std::vector<Outcome> out;
  for_each_product(sets, n, [&](const PureProfile& s) {
    Scalar prob = Scalar::one(m);
    for (std::size_t j = 0; j < n; ++j) prob *= p.probs[j][s[j]];
    Scalar c = Scalar(g.cost(i, s));
    out.push_back({std::move(prob), c.as(m)});
  });
  return out;
}

inline Scalar expectation_of(std::span<const Outcome> d) {
  if (d.empty()) throw std::invalid_argument("empty distribution");
  Scalar e = Scalar::zero(d.front().prob.mode());
  for (const auto& o : d) e += o.prob * o.cost;
  return e;
}

// k-th central moment, computed from the definition.
inline Scalar central_moment_of(std::span<const Outcome> d, unsigned k, const Scalar& mean) {
  Scalar acc = Scalar::zero(mean.mode());
  if (k == 0) {
    for (const auto& o : d) acc += o.prob;
    return acc;
  }
  for (const auto& o : d) acc += o.prob * (o.cost - mean).pow(k);
  return acc;
}

inline Scalar central_moment_of(std::span<const Outcome> d, unsigned k) {
  return central_moment_of(d, k, expectation_of(d));
}

// nu^{-1}(E[nu(cost)]) with nu(x) = x^r on [0, inf).
inline Scalar nu_value_of(std::span<const Outcome> d, unsigned r) {
  Scalar acc = Scalar::zero(d.front().prob.mode());
  for (const auto& o : d) {
    if (o.cost.sign() < 0)
      throw std::domain_error("nu-valuation needs nonnegative costs, got " + o.cost.to_string());
    acc += o.prob * o.cost.pow(r);
  }
  return root(acc, r);
}

inline Scalar evaluate(const ValuationSpec& spec, std::span<const Outcome> d) {
  const Mode m = d.front().prob.mode();
  auto lift = [m](const Rational& q) { return Scalar::from_rational(q, m); };
  return std::visit(
      [&](const auto& v) -> Scalar {
        using T = std::decay_t<decltype(v)>;
        Scalar e = expectation_of(d);
        if constexpr (std::is_same_v<T, Expectation>) {
          return e;
        } else if constexpr (std::is_same_v<T, VarRisk>) {
          return e + lift(v.gamma) * central_moment_of(d, 2, e);
        } else if constexpr (std::is_same_v<T, SdRisk>) {
          return e + lift(v.gamma) * sqrt(central_moment_of(d, 2, e));
        } else if constexpr (std::is_same_v<T, MomentSum>) {
          Scalar acc = lift(v.alpha0) * e;
          for (const auto& [k, a] : v.alpha) acc += lift(a) * central_moment_of(d, k, e);
          return acc;
        } else if constexpr (std::is_same_v<T, NuPower>) {
          return nu_value_of(d, v.r);
        } else {
          Scalar mv = e + lift(v.gamma) * central_moment_of(d, 2, e);
          if (v.lambda == 1) return mv;
          return lift(v.lambda) * mv + lift(1 - v.lambda) * nu_value_of(d, v.r);
        }
      },
      spec);
}

// ---------------------------------------------------------------------------
// Game-level API

template <CostGame G>
Scalar expectation(const G& g, std::size_t i, const MixedProfile& p) {
  return expectation_of(cost_distribution(g, i, p));
}

template <CostGame G>
Scalar k_moment(const G& g, std::size_t i, const MixedProfile& p, unsigned k) {
  return central_moment_of(cost_distribution(g, i, p), k);
}

template <CostGame G>
Scalar valuation(const ValuationSpec& spec, const G& g, std::size_t i, const MixedProfile& p) {
  validate(spec);
  return evaluate(spec, cost_distribution(g, i, p));
}

template <CostGame G>
Scalar risk(const ValuationSpec& spec, const G& g, std::size_t i, const MixedProfile& p) {
  validate(spec);
  auto d = cost_distribution(g, i, p);
  return evaluate(spec, d) - expectation_of(d);
}

// ---------------------------------------------------------------------------
// Two-value closed forms: cost b with probability q, a with probability 1-q.

struct TwoValueDist {
  Scalar a;
  Scalar b;
  Scalar q;
};

inline void validate(const TwoValueDist& d) {
  if (d.b < d.a) throw std::invalid_argument("two-value distribution needs a <= b");
  if (d.q.sign() < 0 || d.q > 1) throw std::invalid_argument("q must lie in [0,1]");
}

namespace detail {

// q(1-q)(b-a)^k (q^{k-1} + (1-q)^{k-1}), the k-th central moment.
inline Scalar two_value_moment(const TwoValueDist& d, unsigned k) {
  Scalar q1 = 1 - d.q;
  return d.q * q1 * (d.b - d.a).pow(k) * (d.q.pow(k - 1) + q1.pow(k - 1));
}

inline Scalar two_value_nu(const TwoValueDist& d, unsigned r) {
  if (d.a.sign() < 0) throw std::domain_error("nu-valuation needs nonnegative costs");
  return root(d.q * d.b.pow(r) + (1 - d.q) * d.a.pow(r), r);
}

}  // namespace detail

inline Scalar two_value_R(const ValuationSpec& spec, const TwoValueDist& d) {
  validate(spec);
  validate(d);
  const Mode m = d.q.mode();
  auto lift = [m](const Rational& q) { return Scalar::from_rational(q, m); };
  const Scalar e = d.a + d.q * (d.b - d.a);
  return std::visit(
      [&](const auto& v) -> Scalar {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Expectation>) {
          return Scalar::zero(m);
        } else if constexpr (std::is_same_v<T, VarRisk>) {
          return lift(v.gamma) * d.q * (1 - d.q) * (d.b - d.a).pow(2);
        } else if constexpr (std::is_same_v<T, SdRisk>) {
          return lift(v.gamma) * sqrt(d.q * (1 - d.q)) * (d.b - d.a);
        } else if constexpr (std::is_same_v<T, MomentSum>) {
          Scalar acc = (lift(v.alpha0) - 1) * e;
          for (const auto& [k, a] : v.alpha) acc += lift(a) * detail::two_value_moment(d, k);
          return acc;
        } else if constexpr (std::is_same_v<T, NuPower>) {
          return detail::two_value_nu(d, v.r) - e;
        } else {
          Scalar var = lift(v.gamma) * d.q * (1 - d.q) * (d.b - d.a).pow(2);
          if (v.lambda == 1) return var;
          return lift(v.lambda) * var + lift(1 - v.lambda) * (detail::two_value_nu(d, v.r) - e);
        }
      },
      spec);
}

inline Scalar two_value_V(const ValuationSpec& spec, const TwoValueDist& d) {
  return d.a + d.q * (d.b - d.a) + two_value_R(spec, d);
}

// ---------------------------------------------------------------------------
// Numeric concavity spot-check along random segments of each player's own
// mixed strategy.

struct ConcavityCheck {
  bool passed = true;
  std::size_t segments = 0;
  double worst_gap = 0.0;  // min of V(mix) - (lam V' + (1-lam) V''), >= -tol on pass
};

template <CostGame G>
ConcavityCheck spot_check_concavity(const ValuationSpec& spec, const G& g, std::size_t segments = 200,
                                    std::uint64_t seed = 0, double tol = kDefaultTol) {
  Rng rng(seed);
  ConcavityCheck res;
  res.worst_gap = std::numeric_limits<double>::infinity();
  const Mode m = needs_roots(spec) ? Mode::kFloat : g.mode();
  for (std::size_t t = 0; t < segments; ++t) {
    std::size_t i = t % g.num_players();
    MixedProfile base = random_profile(rng, g).as(m);
    auto p1 = random_simplex(rng, g.num_strategies(i));
    auto p2 = random_simplex(rng, g.num_strategies(i));
    Scalar lam = random_open_unit(rng, 20);
    std::vector<Scalar> mix;
    for (std::size_t l = 0; l < p1.size(); ++l) mix.push_back(lam * p1[l] + (1 - lam) * p2[l]);
    auto as_mode = [m](std::vector<Scalar> v) {
      for (auto& x : v) x = x.as(m);
      return v;
    };
    Scalar v1 = valuation(spec, g, i, base.with_strategy(i, as_mode(p1)));
    Scalar v2 = valuation(spec, g, i, base.with_strategy(i, as_mode(p2)));
    Scalar vm = valuation(spec, g, i, base.with_strategy(i, as_mode(mix)));
    Scalar lm = lam.as(m);
    Scalar gap = vm - (lm * v1 + (1 - lm) * v2);
    res.worst_gap = std::min(res.worst_gap, gap.to_double());
    ++res.segments;
    if (definitely_less(gap, Scalar::zero(m), tol)) res.passed = false;
  }
  return res;
}

}  // namespace riskeq
