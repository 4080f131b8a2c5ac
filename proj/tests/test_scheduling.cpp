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


#include <gtest/gtest.h>

#include "riskeq/gadgets.hpp"
#include "riskeq/random.hpp"
#include "riskeq/scheduling.hpp"
#include "riskeq/valuation.hpp"

namespace riskeq {
namespace {

TEST(Scheduling, CostOfLoneUnweightedPlayerIsZero) {
  SchedulingGame g(2, 2);
  g.set_weight(0, 1, 1, 5);
  PureProfile s{0, 1};
  EXPECT_EQ(g.cost_value(0, s), 0);
}

TEST(Scheduling, ThreePlayerWeights) {
  SchedulingGame g = three_player_counterexample();
  PureProfile all1{0, 0, 0};
  EXPECT_EQ(g.cost_value(0, all1), 2);
  PureProfile mixed{1, 1, 0};
  EXPECT_EQ(g.cost_value(0, mixed), 1);
  EXPECT_EQ(g.weight(0, 2, 1), 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t l = 0; l < 2; ++l) EXPECT_EQ(g.weight(i, i, l), 0);
  EXPECT_TRUE(check_ordered_links(g).ordered);
  EXPECT_EQ(to_normal_form(g).num_profiles(), 8u);
}

TEST(Scheduling, ZeroWeightsGiveZeroCosts) {
  Game nf = to_normal_form(SchedulingGame(2, 2));
  PureProfile s(2, 0);
  do {
    EXPECT_EQ(nf.cost(0, s).rational(), Rational(0));
    EXPECT_EQ(nf.cost(1, s).rational(), Rational(0));
  } while (nf.advance(s));
}

TEST(Scheduling, OrderedLinksViolations) {
  SchedulingGame g(2, 2);
  g.set_weight(0, 1, 0, 5);
  g.set_weight(0, 1, 1, 5);
  auto r = check_ordered_links(g);
  EXPECT_FALSE(r.ordered);
  ASSERT_TRUE(r.violation);
  EXPECT_EQ(r.violation->player, 0u);
  EXPECT_EQ(r.violation->other, 1u);
  EXPECT_TRUE(check_ordered_links(SchedulingGame(2, 2)).ordered);
}

TEST(Scheduling, FExamples) {
  for (int t = 0; t <= 10; ++t) EXPECT_EQ(f(Scalar::exact(t, 10), 0).rational(), Rational(1));
  EXPECT_EQ(f(Scalar::exact(1, 2), 3).rational(), Rational(0));
  EXPECT_EQ(f(Scalar::exact(3, 10), 2).rational(), Rational(21, 100));
  EXPECT_THROW(f(Scalar::exact(2), 2), std::domain_error);
}

TEST(Scheduling, MomentFormulaBaseCases) {
  SchedulingGame g = three_player_counterexample();
  Rng rng(5);
  MixedProfile p = random_profile(rng, g);
  EXPECT_EQ(k_moment_formula(g, 0, 1, p, 0).rational(), Rational(1));
  EXPECT_EQ(k_moment_formula(g, 0, 1, p, 1).rational(), Rational(0));
  EXPECT_THROW(k_moment_formula(g, 0, 1, p, 3), std::invalid_argument);
}

TEST(Scheduling, MomentFormulaSingleOpponent) {
  SchedulingGame g(2, 2);
  g.set_weight(0, 1, 1, 3);
  MixedProfile p{{{Scalar::exact(1), Scalar::exact(0)}, {Scalar::exact(3, 5), Scalar::exact(2, 5)}}};
  EXPECT_EQ(k_moment_formula(g, 0, 1, p, 2).rational(), f(Scalar::exact(2, 5), 2).rational() * 9);
}

TEST(Scheduling, MomentFormulaMatchesDefinitionOnRandomGames) {
  Rng rng(11);
  for (int t = 0; t < 10; ++t) {
    SchedulingGame g(3, 2);
    std::uniform_int_distribution<long> w(0, 4);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t l = 0; l < 2; ++l) g.set_weight(i, j, l, w(rng));
    MixedProfile p = random_profile(rng, g);
    for (std::size_t link = 0; link < 2; ++link) {
      MixedProfile q = p.with_pure(0, link);
      for (unsigned k : {2u, 4u, 6u})
        EXPECT_EQ(k_moment_formula(g, 0, link, q, k).rational(), k_moment(g, 0, q, k).rational());
    }
  }
}

TEST(Scheduling, EmbracingPolynomial) {
  Scalar p = Scalar::real(0.3), q = Scalar::real(0.7), one = Scalar::real(1.0);
  EXPECT_EQ(embracing_F(3, 3, p, q, one, one, one, Scalar::real(0.0)).to_double(), 0.0);
  double prev = 0.0;
  for (int t = 1; t <= 50; ++t) {
    double v = embracing_F(3, 3, p, q, one, one, one, Scalar::real(t / 10.0)).to_double();
    EXPECT_GT(v, prev);
    prev = v;
  }
  EXPECT_LT((f(p, 3) * f(q, 3)).to_double(), 0.0);
  EXPECT_THROW(embracing_F(2, 3, p, q, one, one, one, one), std::invalid_argument);
}

}  // namespace
}  // namespace riskeq
