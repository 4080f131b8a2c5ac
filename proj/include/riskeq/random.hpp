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
#include <random>
#include <vector>

#include "riskeq/game.hpp"

namespace riskeq {

using Rng = std::mt19937_64;

// Probability vector with small-denominator rational entries: integer weights
// in [lo, max_weight] normalized by their sum. lo = 1 gives full support.
inline std::vector<Scalar> random_simplex(Rng& rng, std::size_t k, bool full_support = false,
                                          long max_weight = 6) {
  std::uniform_int_distribution<long> dist(full_support ? 1 : 0, max_weight);
  std::vector<long> w(k);
  long total = 0;
  while (total == 0) {
    total = 0;
    for (auto& x : w) total += (x = dist(rng));
  }
  std::vector<Scalar> out;
  out.reserve(k);
  for (long x : w) out.push_back(Scalar::exact(x, total));
  return out;
}

template <CostGame G>
MixedProfile random_profile(Rng& rng, const G& g, bool full_support = false, long max_weight = 6) {
  MixedProfile p;
  for (std::size_t i = 0; i < g.num_players(); ++i)
    p.probs.push_back(random_simplex(rng, g.num_strategies(i), full_support, max_weight));
  return p;
}

// Integer costs drawn uniformly from [lo, hi].
inline Game random_game(Rng& rng, const std::vector<std::size_t>& sizes, long lo = 0, long hi = 9) {
  std::vector<std::vector<std::string>> labels;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    std::vector<std::string> ls;
    for (std::size_t l = 0; l < sizes[i]; ++l) ls.push_back("s" + std::to_string(l + 1));
    labels.push_back(std::move(ls));
  }
  std::uniform_int_distribution<long> dist(lo, hi);
  return Game::from_function(labels, [&](const PureProfile& s) {
    std::vector<Scalar> c;
    for (std::size_t i = 0; i < s.size(); ++i) c.push_back(Scalar::exact(dist(rng)));
    return c;
  });
}

// Rational in (0,1) with denominator den, avoiding the endpoints.
inline Scalar random_open_unit(Rng& rng, long den = 100) {
  std::uniform_int_distribution<long> dist(1, den - 1);
  return Scalar::exact(dist(rng), den);
}

}  // namespace riskeq
