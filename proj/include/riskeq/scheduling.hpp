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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "riskeq/game.hpp"
#include "riskeq/scalar.hpp"

namespace riskeq {

// Player-specific scheduling game: all players choose among m links, and
// player i on link l pays the sum of weight(i, i', l) over every player i'
// (itself included) on l. Links are 0-based here; link 0 is the user-facing
// "link 1".
class SchedulingGame {
 public:
  SchedulingGame(std::size_t n, std::size_t m)
      : n_(n), m_(m), omega_(n * n * m, 0) {
    if (n == 0 || m == 0) throw DimensionError("scheduling game needs players and links");
    for (std::size_t i = 0; i < n; ++i) names_.push_back(std::to_string(i));
  }

  std::size_t num_players() const { return n_; }
  std::size_t num_links() const { return m_; }
  std::size_t num_strategies(std::size_t) const { return m_; }
  Mode mode() const { return Mode::kExact; }

  long weight(std::size_t i, std::size_t other, std::size_t link) const {
    return omega_.at(index(i, other, link));
  }
  void set_weight(std::size_t i, std::size_t other, std::size_t link, long w) {
    if (w < 0) throw std::invalid_argument("weights must be nonnegative");
    omega_.at(index(i, other, link)) = w;
  }

  const std::vector<std::string>& player_names() const { return names_; }
  void set_player_names(std::vector<std::string> names) {
    if (names.size() != n_) throw DimensionError("player name count");
    names_ = std::move(names);
  }

  long cost_value(std::size_t i, std::span<const std::size_t> s) const {
    if (s.size() != n_) throw DimensionError("profile length");
    const std::size_t link = s[i];
    long total = 0;
    for (std::size_t other = 0; other < n_; ++other)
      if (s[other] == link) total += omega_[index(i, other, link)];
    return total;
  }
  Scalar cost(std::size_t i, std::span<const std::size_t> s) const {
    return Scalar::exact(cost_value(i, s));
  }

 private:
  std::size_t index(std::size_t i, std::size_t other, std::size_t link) const {
    if (i >= n_ || other >= n_ || link >= m_) throw DimensionError("weight index out of range");
    return (i * n_ + other) * m_ + link;
  }

  std::size_t n_, m_;
  std::vector<long> omega_;
  std::vector<std::string> names_;
};

inline Scalar sched_cost(const SchedulingGame& g, std::size_t i, std::span<const std::size_t> s) {
  return g.cost(i, s);
}

// f(x, j) = (-x)^j (1-x) + (1-x)^j x.
inline Scalar f(const Scalar& x, unsigned j) {
  if (x.sign() < 0 || x > 1) throw std::domain_error("f needs x in [0,1]");
  Scalar minus_x = -x;
  Scalar one_minus = 1 - x;
  return minus_x.pow(j) * one_minus + one_minus.pow(j) * x;
}

// k-th central moment of player i's cost when i sits on `link` and the others
// play p_{-i}, as a partition polynomial over compositions of k with no part
// equal to 1. Accepts k in {0, 1} and every even k.
inline Scalar k_moment_formula(const SchedulingGame& g, std::size_t i, std::size_t link,
                               const MixedProfile& p, unsigned k) {
  if (k > 1 && k % 2 != 0) throw std::invalid_argument("moment formula is for even k");
  check_dimensions(g, p);
  const Mode m = p.mode();
  const std::size_t n = g.num_players();

  std::vector<Scalar> factorial{Scalar::one(m)};
  for (unsigned t = 1; t <= k; ++t) factorial.push_back(factorial.back() * static_cast<long>(t));

  std::vector<std::size_t> others;
  for (std::size_t j = 0; j < n; ++j)
    if (j != i) others.push_back(j);

  // Per other player: f(p_j(link), r) * w^r / r!, for r = 0..k.
  std::vector<std::vector<Scalar>> factor(others.size());
  for (std::size_t t = 0; t < others.size(); ++t) {
    const std::size_t j = others[t];
    const Scalar& x = p.probs[j][link];
    Scalar w = Scalar::from_int(g.weight(i, j, link), m);
    for (unsigned r = 0; r <= k; ++r) factor[t].push_back(f(x, r) * w.pow(r) / factorial[r]);
  }

  Scalar total = Scalar::zero(m);
  // Parts drawn from {0, 2, 3, ..., remaining}; the last player absorbs the rest.
  auto recurse = [&](auto&& self, std::size_t t, unsigned remaining, Scalar acc) -> void {
    if (t == others.size()) {
      if (remaining == 0) total += acc;
      return;
    }
    if (t + 1 == others.size()) {
      if (remaining != 1) self(self, t + 1, 0, acc * factor[t][remaining]);
      return;
    }
    self(self, t + 1, remaining, acc * factor[t][0]);
    for (unsigned r = 2; r <= remaining; ++r) self(self, t + 1, remaining - r, acc * factor[t][r]);
  };
  recurse(recurse, 0, k, Scalar::one(m));
  return factorial[k] * total;
}

inline constexpr std::uint64_t kNormalFormBudget = 10'000'000;

inline Game to_normal_form(const SchedulingGame& g, std::uint64_t budget = kNormalFormBudget) {
  std::uint64_t cells = 1;
  for (std::size_t i = 0; i < g.num_players(); ++i) {
    cells *= g.num_links();
    if (cells > budget)
      throw std::length_error("normal form exceeds budget of " + std::to_string(budget) +
                              " profiles");
  }
  std::vector<std::string> links;
  for (std::size_t l = 0; l < g.num_links(); ++l) links.push_back("link" + std::to_string(l + 1));
  std::vector<std::vector<std::string>> labels(g.num_players(), links);
  return Game::from_function(labels, [&](const PureProfile& s) {
    std::vector<Scalar> c;
    for (std::size_t i = 0; i < s.size(); ++i) c.push_back(g.cost(i, s));
    return c;
  });
}

struct OrderedLinksViolation {
  std::size_t player;
  std::size_t other;
  long w1;
  long w2;
};

struct OrderedLinksResult {
  bool ordered = true;
  std::optional<OrderedLinksViolation> violation;  // first violating pair in (i, i') order
};

// Two ordered links: every pair has w(.,.,1) = w(.,.,2) = 0 or w(.,.,1) < w(.,.,2).
// Self-weights are checked too.
inline OrderedLinksResult check_ordered_links(const SchedulingGame& g) {
  if (g.num_links() != 2) throw std::invalid_argument("ordered-links check needs exactly two links");
  for (std::size_t i = 0; i < g.num_players(); ++i)
    for (std::size_t other = 0; other < g.num_players(); ++other) {
      long w1 = g.weight(i, other, 0), w2 = g.weight(i, other, 1);
      if ((w1 == 0 && w2 == 0) || w1 < w2) continue;
      return {false, OrderedLinksViolation{i, other, w1, w2}};
    }
  return {};
}

// The three-term polynomial from the embracing argument; strictly increasing
// in y >= 0 for odd r, s >= 3, 0 < p < 1/2 < q < 1, alpha*beta >= 1/2.
inline Scalar embracing_F(unsigned r, unsigned s, const Scalar& p, const Scalar& q, const Scalar& w,
                          const Scalar& alpha, const Scalar& beta, const Scalar& y) {
  if (r < 3 || s < 3 || r % 2 == 0 || s % 2 == 0)
    throw std::invalid_argument("r and s must be odd and >= 3");
  if (!(p.sign() > 0 && p * 2 < 1)) throw std::invalid_argument("p must lie in (0, 1/2)");
  if (!(q * 2 > 1 && q < 1)) throw std::invalid_argument("q must lie in (1/2, 1)");
  if (alpha.sign() <= 0 || beta.sign() <= 0 || alpha * beta * 2 < 1)
    throw std::invalid_argument("alpha, beta must be positive with alpha*beta >= 1/2");
  if (y.sign() < 0) throw std::invalid_argument("y must be nonnegative");
  auto fact = [m = y.mode()](unsigned t) {
    Scalar acc = Scalar::one(m);
    for (unsigned u = 2; u <= t; ++u) acc *= static_cast<long>(u);
    return acc;
  };
  Scalar t1 = alpha / (fact(r - 1) * fact(s + 1)) * f(p, r - 1) * f(q, s + 1) * w.pow(s + 1) *
              y.pow(r - 1);
  Scalar t2 = f(p, r) * f(q, s) / (fact(r) * fact(s)) * w.pow(s) * y.pow(r);
  Scalar t3 = beta / (fact(r + 1) * fact(s - 1)) * f(p, r + 1) * f(q, s - 1) * w.pow(s - 1) *
              y.pow(r + 1);
  return t1 + t2 + t3;
}

}  // namespace riskeq
