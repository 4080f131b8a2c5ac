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


// One line per acceptance criterion. Exit status is the number of failures.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "riskeq/riskeq.hpp"

namespace {

using namespace riskeq;

// Pinned tolerances.
constexpr double kVerifyTol = 1e-9;
constexpr double kGridResolution = 0.01;
constexpr double kGridTol = 1e-3;
constexpr double kWeeC = 10.0;

// Collects failed sub-checks for one criterion.
struct Criterion {
  std::vector<std::string> failures;
  std::vector<std::string> notes;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void note(const std::string& s) { notes.push_back(s); }
};

int run_criterion(const std::string& id, const std::string& title, double limit_s,
                  const std::function<void(Criterion&)>& body) {
  Criterion c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.failures.push_back(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream time;
  time.precision(3);
  time << secs << " s, limit " << limit_s << " s";
  if (secs >= limit_s) c.failures.push_back("runtime " + time.str());
  const bool ok = c.failures.empty();
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << id << " " << title << " (" << time.str() << ")\n";
  for (const auto& n : c.notes) std::cout << "         " << n << "\n";
  for (const auto& f : c.failures) std::cout << "         failed: " << f << "\n";
  return ok ? 0 : 1;
}

std::string str(const Scalar& s) { return s.to_string(); }

// WEE at a verified equilibrium: residual <= c * tol (exactly 0 in exact mode).
void expect_wee(Criterion& c, const ValuationSpec& spec, const auto& g, const MixedProfile& p,
                const std::string& what) {
  auto rep = check_wee_at_equilibria(spec, g, {p}, kVerifyTol, kWeeC);
  c.expect(rep.passed, what + ": WEE residual above " + std::to_string(kWeeC) + " * tol");
}

const std::vector<ValuationSpec> kCrawfordSpecs{VarRisk{1}, SdRisk{1}, Combo{Rational(1, 2), 1, 2}};

void ac1(Criterion& c) {
  auto rep = check_moment_formula(200, 0, 4, 5, {0, 1, 2, 4, 6, 8});
  c.expect(rep.passed, "moment formula counterexample " + (rep.counterexample ? rep.counterexample->dump() : ""));
  c.note(std::to_string(rep.samples) + " exact comparisons over 200 games (n <= 4, m = 2, weights <= 5)");
}

void ac2(Criterion& c) {
  for (const auto& spec : kCrawfordSpecs)
    for (const Rational& d : {Rational(1, 10), Rational(1, 4), Rational(1, 2)}) {
      const std::string tag = describe(spec) + " delta=" + d.get_str();
      Game g = crawford(d);
      c.expect(pure_equilibria(spec, g, kVerifyTol).found.empty(), tag + ": pure equilibrium found");
      auto sup = support_enumeration_2p(spec, g, kVerifyTol);
      c.expect(sup.found.empty() && sup.exhausted, tag + ": support enumeration not empty/exhausted");
      const Scalar y = Scalar::exact(2, 3);
      MixedProfile cand{{{y, 1 - y}, {y, 1 - y}}};
      auto vr = verify(spec, g, cand, kVerifyTol);
      c.expect(vr.violation.has_value(), tag + ": WEE candidate passed verify");
      if (vr.violation && d == Rational(1, 4))
        c.note(tag + ": candidate <2/3,1/3>^2 violated by player " + std::to_string(vr.violation->player) +
               " -> " + g.label(vr.violation->player, vr.violation->strategy) + ", improvement " +
               str(vr.violation->improvement));
      if (std::holds_alternative<VarRisk>(spec)) {
        for (const Rational& x : {Rational(0), Rational(1, 2), Rational(1)}) {
          MixedProfile p{{{Scalar(x), Scalar(Rational(1 - x))}, {y, 1 - y}}};
          Rational want = 2 * d * d / 3 * (Rational(4, 3) - x);
          want.canonicalize();
          c.expect(risk(spec, g, 0, p).rational() == want, tag + ": variance at x=" + x.get_str());
        }
      }
    }
  c.note("3 specs x 3 deltas: pure and support enumeration empty; variance (2d^2/3)(4/3-x) exact at x in {0,1/2,1}");
}

void ac3(Criterion& c) {
  const ValuationSpec spec = VarRisk{1};
  const Rational delta = delta_for(spec);
  struct Case {
    std::string text;
    std::vector<bool> assignment;
  };
  for (const auto& cs : {Case{"p cnf 2 1\n1 2 0\n", {true, true}}, Case{"p cnf 2 2\n1 2 0\n-1 2 0\n", {false, true}}}) {
    CnfFormula phi = parse_dimacs(cs.text);
    Game g = sat_game(phi, delta);
    MixedProfile p = sat_assignment_to_profile(phi, cs.assignment);
    auto rep = verify(spec, g, p, kVerifyTol);
    const std::string tag = std::to_string(phi.clauses.size()) + "-clause formula";
    c.expect(rep.is_equilibrium() && rep.mode == Mode::kExact, tag + ": lifted profile not an exact equilibrium");
    for (const auto& pc : rep.players) c.expect(pc.value.rational() == 1, tag + ": V != 1 (" + str(pc.value) + ")");
    expect_wee(c, spec, g, p, tag);
  }
  CnfFormula unsat = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n");
  Game g = sat_game(unsat, delta);
  c.expect(g.num_strategies(0) == 7 && g.num_strategies(1) == 7, "unsat game is not 7x7");
  auto res = support_enumeration_2p(spec, g, kVerifyTol);
  c.expect(res.found.empty() && res.exhausted, "unsat game: support enumeration not empty/exhausted");
  c.note("delta = " + delta.get_str() + "; lifted profiles exact with V1 = V2 = 1; unsat 7x7: " +
         std::to_string(res.candidates_checked) + " candidates, none verify");
}

void ac4(Criterion& c) {
  const ValuationSpec spec = VarRisk{1};
  TdmInstance t = parse_tdm("1\n1 1 1\n");
  MbpInstance inst = tdm_to_mbp(t);
  c.expect(inst.a == std::vector<std::vector<long>>{{1, 1, 1}, {2, 2, 2}}, "A != [[1,1,1],[2,2,2]]");
  c.expect(mbp_verify(inst, {0, 1}), "I = {1,2} rejected");
  SchedulingGame g = mbp_to_scheduling(inst);
  c.expect(check_ordered_links(g).ordered, "gadget links not ordered");
  auto lift = mbp_solution_to_profile(inst, {0, 1}, spec);
  const long M = lift.M;
  const Rational x = lift.x;
  c.expect(x == Rational(1, 2 * M + 1), "x != 1/(2M+1)");
  auto rep = verify(spec, g, lift.profile, kVerifyTol);
  c.expect(rep.is_equilibrium() && rep.mode == Mode::kExact, "lifted profile not an exact equilibrium");
  for (std::size_t k = 0; k < inst.m; ++k) {
    for (std::size_t r : {0u, 2u})
      c.expect(expectation(g, mbp_gadget_player(inst, k, r), lift.profile).rational() == (3 - x) * M,
               "E[k," + std::to_string(r) + "] != (3-x)M");
    for (std::size_t r : {1u, 3u})
      c.expect(expectation(g, mbp_gadget_player(inst, k, r), lift.profile).rational() == (2 + x) * (M + 1),
               "E[k," + std::to_string(r) + "] != (2+x)(M+1)");
  }
  expect_wee(c, spec, g, lift.profile, "MBP lift");
  c.expect(check_mphpn(spec, g, {lift.profile}).passed, "MBP lift violates MPHPN");
  c.note("M = " + std::to_string(M) + ", x = " + x.get_str() + ", " + std::to_string(g.num_players()) +
         " players, exact verify passes");
}

void ac5(Criterion& c) {
  SchedulingGame g = three_player_counterexample();
  const std::vector<ValuationSpec> specs{VarRisk{1}, SdRisk{1}, MomentSum{{{2, 1}, {4, 1}}}};
  for (const auto& spec : specs) {
    c.expect(pure_equilibria(spec, g, kVerifyTol).found.empty(), describe(spec) + ": pure equilibrium found");
    auto grid = grid_search(spec, g, kGridResolution, kGridTol);
    c.expect(grid.found.empty(), describe(spec) + ": grid found " + std::to_string(grid.found.size()) + " points");
    c.note(describe(spec) + ": " + std::to_string(grid.candidates_checked) + " grid points, none within tol");
  }
  auto dyn = best_response_dynamics(specs[0], g, {0, 0, 0});
  c.expect(dyn.kind == DynamicsResult::Kind::kCycle, "dynamics did not report a cycle");
  c.note("dynamics: cycle of length " + std::to_string(dyn.cycle.empty() ? 0 : dyn.cycle.size() - 1));
}

void ac6(Criterion& c) {
  for (const Rational& gamma : {Rational(1, 4), Rational(1), Rational(4)}) {
    for (const ValuationSpec& spec : {ValuationSpec{VarRisk{gamma}}, ValuationSpec{SdRisk{gamma}},
                                      ValuationSpec{Combo{Rational(1, 2), gamma, 2}}}) {
      const Rational delta = delta_for(spec);
      auto rep = check_conditions_2ab(spec, delta);
      c.expect(rep.passed, describe(spec) + ": conditions fail at delta " + delta.get_str() + " " +
                               (rep.counterexample ? rep.counterexample->dump() : ""));
    }
  }
  const Rational d = delta_for(VarRisk{1});
  c.expect(d == Rational(1, 8), "VarRisk gamma=1: delta != 1/8");
  auto rep = check_conditions_2ab(VarRisk{1}, d);
  c.expect(rep.details.value("max_risk_2a", "") == "1/64", "VarRisk gamma=1: max risk != 1/64");
  c.note("VarRisk gamma=1: delta = " + d.get_str() + ", max risk = " + rep.details.value("max_risk_2a", "?"));
}

void ac7(Criterion& c) {
  auto report = [&](const PropertyReport& r) {
    c.expect(r.passed, r.name + " [" + r.domain + "] counterexample " +
                           (r.counterexample ? r.counterexample->dump() : "none"));
  };
  report(check_f_identities());
  report(check_embracing_and_geometric());
  for (const ValuationSpec& spec : {ValuationSpec{VarRisk{1}}, ValuationSpec{SdRisk{1}},
                                    ValuationSpec{MomentSum{{{2, 1}, {4, 1}}}}, ValuationSpec{MomentSum{{{8, 1}}}}})
    report(check_two_values_monotonicity(spec));
  Rng rng(2026);
  Game g = random_game(rng, {2, 3}, 0, 9);
  for (const ValuationSpec& spec : {ValuationSpec{VarRisk{1}}, ValuationSpec{SdRisk{1}}, ValuationSpec{Combo{}}})
    for (std::size_t i = 0; i < 2; ++i) report(check_e_strict_concavity(spec, g, i));
  for (const ValuationSpec& spec :
       {ValuationSpec{Expectation{}}, ValuationSpec{VarRisk{1}}, ValuationSpec{SdRisk{1}},
        ValuationSpec{MomentSum{{{2, 1}, {4, 1}}}}, ValuationSpec{NuPower{2}}, ValuationSpec{NuPower{3}},
        ValuationSpec{Combo{}}})
    report(check_risk_positivity(spec, g));
  c.note("f identities, embracing (r,s) in {3,5,7}^2, geometric mean, two-values monotonicity, "
         "E-strict concavity, risk positivity for 7 specs");
}

void ac8(Criterion& c) {
  auto fp = fp_counterexample();
  for (const auto* row : {&fp.x1_prime, &fp.x1_double_prime}) {
    MixedProfile p{{*row, fp.x2}};
    Scalar e = -expectation(fp.game, 0, p);
    Scalar s2 = Scalar::exact(0);
    for (const auto& o : cost_distribution(fp.game, 0, p)) s2 += o.prob * o.cost * o.cost;
    c.expect(e.rational() == 2, "E != 2 (" + str(e) + ")");
    c.expect(s2.rational() == Rational(65, 8), "second moment != 8 + 1/8 (" + str(s2) + ")");
  }
  auto rep = check_fp_counterexample();
  c.expect(rep.passed, "segment check " + (rep.counterexample ? rep.counterexample->dump() : ""));
  c.note("E = 2 and second moment = 65/8 on both rows; E - Var = " + rep.details.value("E_minus_Var", "?") +
         " along the segment");
}

}  // namespace

int main() {
  std::cout << "tolerances: verify " << kVerifyTol << ", grid resolution " << kGridResolution << ", grid tol "
            << kGridTol << ", WEE constant " << kWeeC << "\n";
  int failures = 0;
  failures += run_criterion("AC1", "moment formula equals definition", 10, ac1);
  failures += run_criterion("AC2", "Crawford game has no equilibrium", 5, ac2);
  failures += run_criterion("AC3", "SAT reduction", 60, ac3);
  failures += run_criterion("AC4", "3DM -> MBP -> scheduling chain", 10, ac4);
  failures += run_criterion("AC5", "three-player counterexample", 120, ac5);
  failures += run_criterion("AC6", "delta-threshold conditions", 5, ac6);
  failures += run_criterion("AC7", "analytic property suites", 30, ac7);
  failures += run_criterion("AC8", "FP counterexample", 1, ac8);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
  return failures;
}
