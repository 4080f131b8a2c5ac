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

#include "riskeq/dimacs.hpp"
#include "riskeq/equilibrium.hpp"
#include "riskeq/gadgets.hpp"

namespace riskeq {
namespace {

const ValuationSpec kVar = VarRisk{1};

Game matching_pennies() {
  auto c = [](long a, long b) { return std::vector<Scalar>{Scalar::exact(a), Scalar::exact(b)}; };
  return Game::from_function({{"H", "T"}, {"H", "T"}}, [&](const PureProfile& s) {
    return s[0] == s[1] ? c(0, 1) : c(1, 0);
  });
}

TEST(Verify, CrawfordPureProfilesAreViolated) {
  Game g = crawford(Rational(1, 4));
  PureProfile s(2, 0);
  do {
    auto rep = verify(kVar, g, MixedProfile::pure(g, s));
    ASSERT_FALSE(rep.is_equilibrium());
    EXPECT_EQ(rep.violation->improvement.rational() > 0, true);
  } while (g.advance(s));
  // (f1,f1): player 0 improves by delta via f2
  PureProfile f1f1{0, 0};
  auto rep = verify(kVar, g, MixedProfile::pure(g, f1f1));
  EXPECT_EQ(rep.violation->player, 0u);
  EXPECT_EQ(rep.violation->strategy, 1u);
  EXPECT_EQ(rep.violation->improvement.rational(), Rational(1, 4));
}

TEST(Verify, SatConstructedProfileIsExactEquilibrium) {
  CnfFormula phi = parse_dimacs("p cnf 2 1\n1 2 0\n");
  Game g = sat_game(phi, delta_for(kVar));
  auto rep = verify(kVar, g, sat_assignment_to_profile(phi, {true, true}));
  EXPECT_TRUE(rep.is_equilibrium());
  EXPECT_EQ(rep.mode, Mode::kExact);
  EXPECT_EQ(rep.players[0].value.rational(), Rational(1));
  EXPECT_EQ(rep.players[1].value.rational(), Rational(1));
}

TEST(Verify, MatchingPenniesUniformUnderExpectation) {
  Game g = matching_pennies();
  auto rep = verify(Expectation{}, g, MixedProfile::uniform(g));
  EXPECT_TRUE(rep.is_equilibrium());
  for (const auto& pc : rep.players) EXPECT_EQ(pc.slack.rational(), Rational(0));
}

TEST(Verify, SdRiskFallsBackToFloat) {
  Game g = matching_pennies();
  MixedProfile p{{{Scalar::exact(1, 3), Scalar::exact(2, 3)}, {Scalar::exact(1, 2), Scalar::exact(1, 2)}}};
  auto rep = verify(SdRisk{1}, g, p);
  EXPECT_EQ(rep.mode, Mode::kFloat);
}

TEST(Verify, FloatProfileOnExactGame) {
  Game g = matching_pennies();
  auto rep = verify(Expectation{}, g, MixedProfile::uniform(g, Mode::kFloat));
  EXPECT_TRUE(rep.is_equilibrium());
  EXPECT_EQ(rep.mode, Mode::kFloat);
}

TEST(Verify, MomentSumWithoutConcavityIsSpotChecked) {
  Game g = matching_pennies();
  MomentSum ms{{{2, 1}}};
  ms.asserted_concave = false;
  EXPECT_NO_THROW(verify(ms, g, MixedProfile::uniform(g)));
}

TEST(PureEquilibria, CrawfordAndThreePlayerAreEmpty) {
  auto r1 = pure_equilibria(kVar, crawford(Rational(3, 10)));
  EXPECT_TRUE(r1.found.empty());
  EXPECT_TRUE(r1.exhausted);
  for (ValuationSpec spec : {kVar, ValuationSpec{SdRisk{1}}, ValuationSpec{Expectation{}}}) {
    auto r2 = pure_equilibria(spec, three_player_counterexample());
    EXPECT_TRUE(r2.found.empty());
    EXPECT_EQ(r2.candidates_checked, 8u);
  }
}

TEST(PureEquilibria, OnePlayerArgmin) {
  Game g({{"a", "b", "c"}}, {Scalar::exact(3), Scalar::exact(1), Scalar::exact(1)});
  auto r = pure_equilibria(kVar, g);
  ASSERT_EQ(r.found.size(), 2u);
  EXPECT_EQ(r.found[0].profile.probs[0][1].rational() + r.found[1].profile.probs[0][1].rational(), Rational(1));
}

TEST(WeeResidual, CrawfordExamples) {
  const Rational d(1, 4);
  Game g = crawford(d);
  std::vector<Scalar> mix{Scalar::exact(1, 2), Scalar::exact(1, 2)};
  MixedProfile p{{mix, {Scalar::exact(2, 3), Scalar::exact(1, 3)}}};
  EXPECT_EQ(wee_residual(kVar, g, p)[0].rational(), Rational(0));
  p.probs[1] = mix;
  // |1 + y d - (1 + 2d - 2y d)| at y = 1/2
  EXPECT_EQ(wee_residual(kVar, g, p)[0].rational(), Rational(1, 8));
  PureProfile s{0, 1};
  auto pure = wee_residual(kVar, g, MixedProfile::pure(g, s));
  EXPECT_EQ(pure[0].rational(), Rational(0));
  EXPECT_EQ(pure[1].rational(), Rational(0));
}

TEST(SupportEnumeration, CrawfordHasNoEquilibrium) {
  for (auto d : {Rational(1, 10), Rational(1, 4), Rational(1, 2)}) {
    auto r = support_enumeration_2p(kVar, crawford(d));
    EXPECT_TRUE(r.found.empty());
    EXPECT_TRUE(r.exhausted);
  }
}

TEST(SupportEnumeration, VertexCapClearsExhausted) {
  SupportOptions opt;
  opt.vertex_cap = 1;
  auto r = support_enumeration_2p(kVar, crawford(Rational(1, 4)), kDefaultTol, opt);
  EXPECT_TRUE(r.found.empty());
  EXPECT_FALSE(r.exhausted);
}

TEST(SupportEnumeration, FindsMatchingPenniesUnderExpectation) {
  auto r = support_enumeration_2p(Expectation{}, matching_pennies());
  ASSERT_EQ(r.found.size(), 1u);
  EXPECT_EQ(profile_key(r.found[0].profile), "1/2,1/2|1/2,1/2");
}

TEST(SupportEnumeration, SatisfiableSatGameHasEquilibria) {
  CnfFormula phi = parse_dimacs("p cnf 2 1\n1 2 0\n");
  Game g = sat_game(phi, delta_for(kVar));
  SupportOptions opt;
  opt.max_support_size = 2;
  auto r = support_enumeration_2p(kVar, g, kDefaultTol, opt);
  EXPECT_FALSE(r.exhausted);
  ASSERT_FALSE(r.found.empty());
  std::set<std::string> keys;
  for (const auto& rep : r.found) keys.insert(profile_key(rep.profile));
  EXPECT_TRUE(keys.count(profile_key(sat_assignment_to_profile(phi, {true, true}))));
}

TEST(SupportEnumeration, UnsatisfiableSatGameIsEmpty) {
  CnfFormula phi = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n");
  Game g = sat_game(phi, delta_for(kVar));
  auto r = support_enumeration_2p(kVar, g);
  EXPECT_TRUE(r.found.empty());
  EXPECT_TRUE(r.exhausted);
}

TEST(SupportEnumeration, RejectsNonTwoPlayerGames) {
  EXPECT_THROW(support_enumeration_2p(kVar, three_player_counterexample()), std::invalid_argument);
}

TEST(GridSearch, OnePlayerFindsMinimizingVertex) {
  Game g({{"a", "b"}}, {Scalar::exact(2), Scalar::exact(1)});
  auto r = grid_search(kVar, g, 0.1);
  ASSERT_EQ(r.found.size(), 1u);
  EXPECT_NEAR(r.found[0].profile.probs[0][1].to_double(), 1.0, 1e-12);
}

TEST(GridSearch, ThreePlayerCoarseGridIsEmpty) {
  GridOptions opt;
  opt.workers = 2;
  auto r = grid_search(kVar, three_player_counterexample(), 0.05, 1e-3, opt);
  EXPECT_TRUE(r.found.empty());
  EXPECT_EQ(r.candidates_checked, 21u * 21u * 21u);
}

TEST(GridSearch, ExtraCandidateIsAccepted) {
  MbpInstance inst = tdm_to_mbp(parse_tdm("1\n1 1 1\n"));
  auto lift = mbp_solution_to_profile(inst, {0, 1}, kVar);
  GridOptions opt;
  opt.extra_candidates.push_back(lift.profile);
  // resolution 1 keeps the grid tiny; the lifted profile is what we look for
  auto r = grid_search(kVar, mbp_to_scheduling(inst), 1.0, 1e-3, opt);
  std::set<std::string> keys;
  for (const auto& rep : r.found) keys.insert(profile_key(rep.profile));
  EXPECT_TRUE(keys.count(profile_key(lift.profile)));
}

TEST(Dynamics, CrawfordFourCycle) {
  Game g = crawford(Rational(1, 4));
  auto r = best_response_dynamics(kVar, g, {0, 0});
  ASSERT_EQ(r.kind, DynamicsResult::Kind::kCycle);
  std::vector<PureProfile> want{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}};
  EXPECT_EQ(r.cycle, want);
}

TEST(Dynamics, DominantStrategiesConverge) {
  auto c = [](long a, long b) { return std::vector<Scalar>{Scalar::exact(a), Scalar::exact(b)}; };
  Game g = Game::from_function({{"a", "b"}, {"a", "b"}},
                               [&](const PureProfile& s) { return c(s[0] == 0 ? 5 : 1, s[1] == 0 ? 5 : 1); });
  auto r = best_response_dynamics(kVar, g, {0, 0});
  EXPECT_EQ(r.kind, DynamicsResult::Kind::kConverged);
  EXPECT_LE(r.steps, 2u);
  EXPECT_EQ(r.path.back(), (PureProfile{1, 1}));
}

TEST(Dynamics, ThreePlayerCycles) {
  auto r = best_response_dynamics(kVar, three_player_counterexample(), {0, 0, 0});
  EXPECT_EQ(r.kind, DynamicsResult::Kind::kCycle);
  EXPECT_EQ(r.cycle.front(), r.cycle.back());
}

}  // namespace
}  // namespace riskeq
