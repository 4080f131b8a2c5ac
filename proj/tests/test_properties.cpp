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
#include "riskeq/properties.hpp"

namespace riskeq {
namespace {

Game nonneg_game(std::uint64_t seed) {
  Rng rng(seed);
  return random_game(rng, {2, 3}, 0, 9);
}

TEST(Properties, RiskPositivity) {
  Game g = nonneg_game(1);
  for (ValuationSpec spec : {ValuationSpec{NuPower{2}}, ValuationSpec{NuPower{3}}, ValuationSpec{VarRisk{1}},
                             ValuationSpec{SdRisk{1}}, ValuationSpec{Combo{}}}) {
    auto rep = check_risk_positivity(spec, g, 100, 7);
    EXPECT_TRUE(rep.passed) << describe(spec) << " " << to_json(rep).dump();
    EXPECT_GT(rep.samples, 100u);
  }
}

TEST(Properties, RiskPositivityExpectationSkipsStrictCase) {
  auto rep = check_risk_positivity(Expectation{}, nonneg_game(2), 50, 1);
  EXPECT_TRUE(rep.passed);
  EXPECT_TRUE(rep.details.contains("note"));
}

TEST(Properties, EStrictConcavity) {
  Game g = nonneg_game(3);
  for (ValuationSpec spec : {ValuationSpec{VarRisk{1}}, ValuationSpec{Combo{}}}) {
    auto rep = check_e_strict_concavity(spec, g, 0, 200, 4);
    EXPECT_TRUE(rep.passed) << describe(spec);
  }
}

TEST(Properties, WeeAndOptimalValueAtSatEquilibrium) {
  CnfFormula phi = parse_dimacs("p cnf 2 1\n1 2 0\n");
  Game g = sat_game(phi, delta_for(VarRisk{1}));
  MixedProfile p = sat_assignment_to_profile(phi, {true, true});
  EXPECT_TRUE(check_wee_at_equilibria(VarRisk{1}, g, {p}).passed);
  auto ov = check_optimal_value(VarRisk{1}, g, 0, p, 20, 3);
  EXPECT_TRUE(ov.passed);
  PureProfile s{0, 0};
  EXPECT_TRUE(check_optimal_value(VarRisk{1}, g, 0, MixedProfile::pure(g, s)).passed);
}

TEST(Properties, MbpEquilibriumProperties) {
  MbpInstance inst = tdm_to_mbp(parse_tdm("1\n1 1 1\n"));
  SchedulingGame g = mbp_to_scheduling(inst);
  MixedProfile p = mbp_solution_to_profile(inst, {0, 1}, VarRisk{1}).profile;
  EXPECT_TRUE(check_wee_at_equilibria(VarRisk{1}, g, {p}).passed);
  EXPECT_TRUE(check_mphpn(VarRisk{1}, g, {p}).passed);
  for (std::size_t k = 0; k < inst.m; ++k)
    EXPECT_TRUE(check_optimal_value(VarRisk{1}, g, mbp_gadget_player(inst, k, 4), p).passed);
}

TEST(Properties, MphpnFlagsMixedNeighbours) {
  SchedulingGame g = three_player_counterexample();
  std::vector<Scalar> half{Scalar::exact(1, 2), Scalar::exact(1, 2)};
  MixedProfile fake{{half, {Scalar::exact(1), Scalar::exact(0)}, half}};
  EXPECT_FALSE(check_mphpn(VarRisk{1}, g, {fake}).passed);
  EXPECT_FALSE(verify(VarRisk{1}, g, fake).is_equilibrium());
  PureProfile s{0, 0, 1};
  EXPECT_TRUE(check_mphpn(VarRisk{1}, g, {MixedProfile::pure(g, s)}).passed);
}

TEST(Properties, ConditionsForDeltaFor) {
  auto rep = check_conditions_2ab(VarRisk{1}, Rational(1, 8));
  EXPECT_TRUE(rep.passed);
  EXPECT_EQ(rep.details["max_risk_2a"], "1/64");
  for (ValuationSpec spec : {ValuationSpec{SdRisk{1}}, ValuationSpec{Combo{}}, ValuationSpec{VarRisk{4}}})
    EXPECT_TRUE(check_conditions_2ab(spec, delta_for(spec), 200, 50).passed) << describe(spec);
}

TEST(Properties, TwoValuesMonotonicity) {
  for (ValuationSpec spec : {ValuationSpec{VarRisk{1}}, ValuationSpec{SdRisk{1}},
                             ValuationSpec{MomentSum{{{2, 1}}}}, ValuationSpec{MomentSum{{{8, 1}}}}})
    EXPECT_TRUE(check_two_values_monotonicity(spec, 6, 2, 40).passed) << describe(spec);
}

TEST(Properties, AnalyticSuites) {
  EXPECT_TRUE(check_f_identities(40, 8).passed);
  EXPECT_TRUE(check_embracing_and_geometric(1e-4, 5.0, 20).passed);
  EXPECT_TRUE(check_fp_counterexample().passed);
  EXPECT_TRUE(check_moment_formula(20, 9).passed);
}

TEST(Properties, CrawfordNonexistence) {
  auto rep = check_crawford_nonexistence(VarRisk{1}, Rational(1, 4), 0.05);
  EXPECT_TRUE(rep.passed) << to_json(rep).dump();
  EXPECT_TRUE(check_crawford_nonexistence(SdRisk{1}, Rational(1, 4), 0.05).passed);
}

TEST(Properties, CrawfordCandidateVarianceFormula) {
  const Rational d(1, 4);
  for (auto x : {Rational(0), Rational(1, 3), Rational(1)}) {
    Rational want = 2 * d * d / 3 * (Rational(4, 3) - x);
    want.canonicalize();
    EXPECT_EQ(crawford_candidate_variance(d, x), want);
  }
}

TEST(Properties, ReportsCounterexampleOnFailure) {
  PropertyReport rep;
  rep.check(true, 0.5, "a");
  rep.check(false, -1.0, "b");
  rep.check(false, -2.0, "c");
  EXPECT_FALSE(rep.passed);
  EXPECT_EQ((*rep.counterexample)["case"], "b");
  EXPECT_EQ(rep.min_margin, -2.0);
  EXPECT_EQ(rep.samples, 3u);
}

}  // namespace
}  // namespace riskeq
