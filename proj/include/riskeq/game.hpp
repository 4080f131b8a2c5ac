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
#include <concepts>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "riskeq/scalar.hpp"

namespace riskeq {

using PureProfile = std::vector<std::size_t>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Anything that assigns a cost to every (player, pure profile) pair. Game and
// SchedulingGame both model it, so valuations and equilibrium checks run on
// scheduling games without materializing the m^n cost tensor.
template <class G>
concept CostGame = requires(const G& g, std::size_t i, std::span<const std::size_t> s) {
  { g.num_players() } -> std::convertible_to<std::size_t>;
  { g.num_strategies(i) } -> std::convertible_to<std::size_t>;
  { g.cost(i, s) } -> std::convertible_to<Scalar>;
  { g.mode() } -> std::same_as<Mode>;
};

// Finite normal-form minimization game with a dense cost tensor. Profiles are
// laid out in mixed radix with the last player varying fastest.
class Game {
 public:
  using CostFn = std::function<std::vector<Scalar>(const PureProfile&)>;

  Game(std::vector<std::vector<std::string>> labels, std::vector<Scalar> costs)
      : labels_(std::move(labels)), costs_(std::move(costs)) {
    init_strides();
    if (costs_.size() != num_profiles_ * num_players())
      throw DimensionError("cost tensor has " + std::to_string(costs_.size()) +
                           " entries, expected " +
                           std::to_string(num_profiles_ * num_players()));
    mode_ = costs_.empty() ? Mode::kExact : costs_.front().mode();
    for (const auto& c : costs_)
      if (c.mode() != mode_) throw ModeError("cost entries mix exact and float");
  }

  static Game from_function(std::vector<std::vector<std::string>> labels, const CostFn& fn) {
    Game shell(labels);
    std::vector<Scalar> costs;
    costs.reserve(shell.num_profiles_ * shell.num_players());
    PureProfile s(shell.num_players(), 0);
    for (std::size_t idx = 0; idx < shell.num_profiles_; ++idx) {
      auto c = fn(s);
      if (c.size() != shell.num_players()) throw DimensionError("cost vector length");
      for (auto& v : c) costs.push_back(std::move(v));
      shell.advance(s);
    }
    return Game(std::move(labels), std::move(costs));
  }

  std::size_t num_players() const { return labels_.size(); }
  std::size_t num_strategies(std::size_t i) const { return labels_.at(i).size(); }
  std::size_t num_profiles() const { return num_profiles_; }
  Mode mode() const { return mode_; }

  const std::vector<std::vector<std::string>>& labels() const { return labels_; }
  const std::string& label(std::size_t i, std::size_t l) const { return labels_.at(i).at(l); }
  std::optional<std::size_t> find_strategy(std::size_t i, std::string_view label) const {
    const auto& ls = labels_.at(i);
    auto it = std::find(ls.begin(), ls.end(), label);
    if (it == ls.end()) return std::nullopt;
    return static_cast<std::size_t>(it - ls.begin());
  }

  std::size_t profile_index(std::span<const std::size_t> s) const {
    if (s.size() != num_players()) throw DimensionError("profile length");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] >= num_strategies(i)) throw DimensionError("strategy index out of range");
      idx += s[i] * strides_[i];
    }
    return idx;
  }
  PureProfile profile_at(std::size_t idx) const {
    PureProfile s(num_players());
    for (std::size_t i = 0; i < s.size(); ++i) {
      s[i] = idx / strides_[i];
      idx %= strides_[i];
    }
    return s;
  }

  const Scalar& cost(std::size_t player, std::span<const std::size_t> s) const {
    return costs_[profile_index(s) * num_players() + player];
  }

  Game to_mode(Mode m) const {
    std::vector<Scalar> c;
    c.reserve(costs_.size());
    for (const auto& v : costs_) c.push_back(v.as(m));
    return Game(labels_, std::move(c));
  }

  // Increments s in profile order; returns false after the last profile.
  bool advance(PureProfile& s) const {
    for (std::size_t i = s.size(); i-- > 0;) {
      if (++s[i] < num_strategies(i)) return true;
      s[i] = 0;
    }
    return false;
  }

 private:
  explicit Game(std::vector<std::vector<std::string>> labels) : labels_(std::move(labels)) {
    init_strides();
  }
  void init_strides() {
    if (labels_.empty()) throw DimensionError("game needs at least one player");
    strides_.assign(labels_.size(), 1);
    num_profiles_ = 1;
    for (std::size_t i = labels_.size(); i-- > 0;) {
      if (labels_[i].empty()) throw DimensionError("empty strategy set");
      strides_[i] = num_profiles_;
      num_profiles_ *= labels_[i].size();
    }
  }

  std::vector<std::vector<std::string>> labels_;
  std::vector<Scalar> costs_;
  std::vector<std::size_t> strides_;
  std::size_t num_profiles_ = 0;
  Mode mode_ = Mode::kExact;
};

// One probability vector per player.
struct MixedProfile {
  std::vector<std::vector<Scalar>> probs;

  std::size_t num_players() const { return probs.size(); }
  const Scalar& operator()(std::size_t i, std::size_t l) const { return probs.at(i).at(l); }

  Mode mode() const {
    return probs.empty() || probs[0].empty() ? Mode::kExact : probs[0][0].mode();
  }

  MixedProfile as(Mode m) const {
    MixedProfile out{probs};
    for (auto& row : out.probs)
      for (auto& v : row) v = v.as(m);
    return out;
  }

  // Copy with player i switched to pure strategy l.
  MixedProfile with_pure(std::size_t i, std::size_t l) const {
    MixedProfile out = *this;
    Mode m = probs.at(i).at(l).mode();
    for (auto& v : out.probs[i]) v = Scalar::zero(m);
    out.probs[i][l] = Scalar::one(m);
    return out;
  }

  MixedProfile with_strategy(std::size_t i, std::vector<Scalar> p) const {
    MixedProfile out = *this;
    out.probs.at(i) = std::move(p);
    return out;
  }

  template <CostGame G>
  static MixedProfile pure(const G& g, std::span<const std::size_t> s, Mode m = Mode::kExact) {
    if (s.size() != g.num_players()) throw DimensionError("profile length");
    MixedProfile p;
    for (std::size_t i = 0; i < s.size(); ++i) {
      std::vector<Scalar> row(g.num_strategies(i), Scalar::zero(m));
      row.at(s[i]) = Scalar::one(m);
      p.probs.push_back(std::move(row));
    }
    return p;
  }

  template <CostGame G>
  static MixedProfile uniform(const G& g, Mode m = Mode::kExact) {
    MixedProfile p;
    for (std::size_t i = 0; i < g.num_players(); ++i) {
      long k = static_cast<long>(g.num_strategies(i));
      p.probs.emplace_back(g.num_strategies(i), Scalar::one(m) / k);
    }
    return p;
  }

  friend bool operator==(const MixedProfile&, const MixedProfile&) = default;
};

template <CostGame G>
void check_dimensions(const G& g, const MixedProfile& p) {
  if (p.num_players() != g.num_players())
    throw DimensionError("profile has " + std::to_string(p.num_players()) +
                         " players, game has " + std::to_string(g.num_players()));
  for (std::size_t i = 0; i < p.num_players(); ++i)
    if (p.probs[i].size() != g.num_strategies(i))
      throw DimensionError("player " + std::to_string(i) + " has " +
                           std::to_string(g.num_strategies(i)) + " strategies, profile gives " +
                           std::to_string(p.probs[i].size()));
}

// Dimensions, nonnegativity, and unit sums (exact, or within tol for floats).
template <CostGame G>
void validate(const G& g, const MixedProfile& p, double tol = kDefaultTol) {
  check_dimensions(g, p);
  for (std::size_t i = 0; i < p.num_players(); ++i) {
    Mode m = p.probs[i].front().mode();
    Scalar sum = Scalar::zero(m);
    for (const auto& v : p.probs[i]) {
      if (definitely_less(v, Scalar::zero(m), tol))
        throw std::invalid_argument("negative probability for player " + std::to_string(i));
      sum += v;
    }
    if (!approx_equal(sum, Scalar::one(m), tol))
      throw std::invalid_argument("probabilities of player " + std::to_string(i) +
                                  " sum to " + sum.to_string());
  }
}

inline Scalar profile_probability(const MixedProfile& p, std::span<const std::size_t> s) {
  if (s.size() != p.num_players()) throw DimensionError("profile length");
  Scalar prob = Scalar::one(p.mode());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] >= p.probs[i].size()) throw DimensionError("strategy index out of range");
    prob *= p.probs[i][s[i]];
  }
  return prob;
}

using Support = std::vector<std::vector<std::size_t>>;

// In float mode entries above tol count as positive.
inline std::vector<std::size_t> support_of(const std::vector<Scalar>& pi, double tol = kDefaultTol) {
  std::vector<std::size_t> out;
  for (std::size_t l = 0; l < pi.size(); ++l)
    if (is_positive(pi[l], tol)) out.push_back(l);
  return out;
}

inline Support support(const MixedProfile& p, double tol = kDefaultTol) {
  Support s;
  for (const auto& row : p.probs) s.push_back(support_of(row, tol));
  return s;
}

inline bool is_pure(const std::vector<Scalar>& pi, double tol = kDefaultTol) {
  return support_of(pi, tol).size() == 1;
}

// Visits every s_{-i} in the product of the given per-player index sets,
// skipping player `skip` (whose slot is left at 0). Pass skip = n to visit
// full profiles.
template <class Fn>
void for_each_product(const std::vector<std::vector<std::size_t>>& sets, std::size_t skip, Fn&& fn) {
  const std::size_t n = sets.size();
  for (std::size_t j = 0; j < n; ++j)
    if (j != skip && sets[j].empty()) return;
  std::vector<std::size_t> pos(n, 0);
  PureProfile s(n, 0);
  for (std::size_t j = 0; j < n; ++j)
    if (j != skip) s[j] = sets[j][0];
  while (true) {
    fn(static_cast<const PureProfile&>(s));
    std::size_t j = n;
    while (j-- > 0) {
      if (j == skip) continue;
      if (++pos[j] < sets[j].size()) {
        s[j] = sets[j][pos[j]];
        break;
      }
      pos[j] = 0;
      s[j] = sets[j][0];
    }
    if (j == static_cast<std::size_t>(-1)) return;
  }
}

// Every partial profile s_{-i} exactly once, as a full-length vector whose
// i-th slot is 0.
template <CostGame G>
std::vector<PureProfile> enumerate_partial_profiles(const G& g, std::size_t i) {
  std::vector<std::vector<std::size_t>> sets(g.num_players());
  for (std::size_t j = 0; j < g.num_players(); ++j)
    for (std::size_t l = 0; l < g.num_strategies(j); ++l) sets[j].push_back(l);
  std::vector<PureProfile> out;
  for_each_product(sets, i, [&](const PureProfile& s) { out.push_back(s); });
  return out;
}

}  // namespace riskeq
