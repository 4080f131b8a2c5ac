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

#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "riskeq/riskeq.hpp"

namespace riskeq::cli {
namespace {

// Diagnostics are prefixed by category so scripts can tell them apart.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ModeRequestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  // shared
  std::string valuation = "e+var:gamma=1";
  std::string mode = "auto";
  double tol = kDefaultTol;
  std::string output;
  std::uint64_t seed = 0;
  unsigned workers = 0;

  // gadget / lift
  std::string kind;
  std::string delta;
  std::string cnf;
  std::string input;
  std::string assign;
  std::string rows;

  // solve / verify
  std::string method = "support2p";
  std::string game;
  std::string profile;
  double resolution = 0.01;
  double grid_tol = 1e-3;
  std::size_t max_support = 0;
  std::uint64_t max_pairs = 1u << 22;
  std::string start;
  std::size_t max_steps = 10'000;
  std::vector<std::string> seed_profiles;

  // check
  std::string property;
  std::size_t samples = 500;
  std::size_t player = 0;
  long steps_a = 1000;
  long steps_b = 100;
};

Json config_json(const std::string& command, const Options& o) {
  Json c{{"command", command}, {"valuation", o.valuation}, {"mode", o.mode}, {"tol", o.tol}};
  if (!o.kind.empty()) c["kind"] = o.kind;
  if (!o.delta.empty()) c["delta"] = o.delta;
  if (!o.cnf.empty()) c["cnf"] = o.cnf;
  if (!o.input.empty()) c["input"] = o.input;
  if (!o.assign.empty()) c["assign"] = o.assign;
  if (!o.rows.empty()) c["rows"] = o.rows;
  if (!o.game.empty()) c["game"] = o.game;
  if (!o.profile.empty()) c["profile"] = o.profile;
  if (command == "solve") {
    c["method"] = o.method;
    c["resolution"] = o.resolution;
    c["grid_tol"] = o.grid_tol;
    c["max_support"] = o.max_support;
    c["max_pairs"] = o.max_pairs;
    c["start"] = o.start;
    c["max_steps"] = o.max_steps;
    c["workers"] = o.workers ? o.workers : default_workers();
    c["seed_profiles"] = o.seed_profiles;
  }
  if (command == "check") {
    c["property"] = o.property;
    c["seed"] = o.seed;
    c["samples"] = o.samples;
    c["player"] = o.player;
    c["steps_a"] = o.steps_a;
    c["steps_b"] = o.steps_b;
    c["resolution"] = o.resolution;
  }
  if (!o.output.empty()) c["output"] = o.output;
  return c;
}

ValuationSpec load_spec(const std::string& text) {
  if (std::filesystem::exists(text) && std::filesystem::is_regular_file(text))
    return spec_from_json(load_json_file(text));
  return parse_spec_shorthand(text);
}

Rational parse_rational(const std::string& text, const char* what) {
  try {
    return Scalar::parse(text).rational();
  } catch (const std::invalid_argument&) {
    throw InputError(std::string(what) + " must be a rational like 1/4, got '" + text + "'");
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::size_t> parse_index_list(const std::string& text, const char* what) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      long v = std::stol(item, &pos);
      if (pos != item.size() || v < 0) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw InputError(std::string(what) + " must be a comma-separated list of integers, got '" + text + "'");
    }
  }
  return out;
}

// A file holding either a normal-form game or a scheduling game.
struct AnyGame {
  std::optional<Game> normal;
  std::optional<SchedulingGame> sched;
};

AnyGame load_game(const std::string& path) {
  Json j = load_json_file(path);
  AnyGame g;
  if (j.contains("omega"))
    g.sched = scheduling_from_json(j);
  else
    g.normal = game_from_json(j);
  return g;
}

template <class Fn>
auto with_game(const AnyGame& g, Fn&& fn) {
  if (g.sched) return fn(*g.sched);
  return fn(*g.normal);
}

void emit(const Options& o, std::ostream& out, const Json& doc) {
  const std::string text = doc.dump(2) + "\n";
  if (o.output.empty())
    out << text;
  else
    write_text_file(o.output, text);
}

Json envelope(const std::string& command, const Options& o, Json result) {
  return Json{{"schema_version", kSchemaVersion}, {"command", command}, {"config", config_json(command, o)}, {"result", std::move(result)}};
}

// ---------------------------------------------------------------------------

int cmd_gadget(const Options& o, std::ostream& out) {
  Json doc;
  if (o.kind == "crawford") {
    doc = to_json(crawford(parse_rational(o.delta.empty() ? "1/4" : o.delta, "--delta")));
  } else if (o.kind == "sat") {
    if (o.cnf.empty()) throw InputError("gadget sat needs --cnf");
    CnfFormula phi = parse_dimacs(read_text(o.cnf));
    Rational delta = o.delta.empty() ? delta_for(load_spec(o.valuation)) : parse_rational(o.delta, "--delta");
    doc = to_json(sat_game(phi, delta));
  } else if (o.kind == "mbp-from-3dm") {
    if (o.input.empty()) throw InputError("gadget mbp-from-3dm needs an input file");
    doc = to_json(tdm_to_mbp(parse_tdm(read_text(o.input))));
  } else if (o.kind == "sched-from-mbp") {
    if (o.input.empty()) throw InputError("gadget sched-from-mbp needs an input file");
    doc = to_json(mbp_to_scheduling(mbp_from_json(load_json_file(o.input))));
  } else if (o.kind == "three-player") {
    doc = to_json(three_player_counterexample());
  } else if (o.kind == "fp-counterexample") {
    auto fp = fp_counterexample();
    doc = to_json(fp.game);
    doc["negated_payoffs"] = fp.negated;
  } else {
    throw InputError("unknown gadget '" + o.kind + "'");
  }
  emit(o, out, doc);
  return kExitOk;
}

int cmd_lift(const Options& o, std::ostream& out) {
  if (o.kind == "sat-assignment") {
    if (o.cnf.empty()) throw InputError("lift sat-assignment needs --cnf");
    CnfFormula phi = parse_dimacs(read_text(o.cnf));
    if (o.assign.size() != static_cast<std::size_t>(phi.num_vars) ||
        o.assign.find_first_not_of("01") != std::string::npos)
      throw InputError("--assign needs one 0/1 digit per variable (" + std::to_string(phi.num_vars) + ")");
    std::vector<bool> a;
    for (char c : o.assign) a.push_back(c == '1');
    if (!satisfies(phi, a)) throw InputError("assignment " + o.assign + " does not satisfy the formula");
    emit(o, out, to_json(sat_assignment_to_profile(phi, a)));
    return kExitOk;
  }
  if (o.kind == "mbp-solution") {
    if (o.input.empty()) throw InputError("lift mbp-solution needs an MBP input file");
    MbpInstance inst = mbp_from_json(load_json_file(o.input));
    std::set<std::size_t> rows;
    for (std::size_t r : parse_index_list(o.rows, "--rows")) {
      if (r == 0 || r > inst.n) throw InputError("--rows uses 1-based row indices in 1.." + std::to_string(inst.n));
      rows.insert(r - 1);
    }
    if (!mbp_verify(inst, rows)) throw InputError("rows " + o.rows + " do not solve the MBP instance");
    auto lift = mbp_solution_to_profile(inst, rows, load_spec(o.valuation));
    Json doc = to_json(lift.profile);
    doc["x"] = lift.x.get_str();
    doc["M"] = lift.M;
    emit(o, out, doc);
    return kExitOk;
  }
  throw InputError("unknown lift '" + o.kind + "'");
}

template <CostGame G>
EquilibriumReport verify_with_mode(const ValuationSpec& spec, const G& g, MixedProfile p, const Options& o) {
  if (o.mode == "float") return verify(spec, g, p.as(Mode::kFloat), o.tol);
  if (o.mode == "exact") {
    if (p.mode() != Mode::kExact || g.mode() != Mode::kExact)
      throw ModeRequestError("exact mode needs an exact game and profile");
    validate(spec);
    validate(g, p, o.tol);
    require_concave(spec, g, o.tol);
    try {
      return detail::verify_in_mode(spec, g, p, Mode::kExact, o.tol, false);
    } catch (const InexactRoot& e) {
      throw ModeRequestError(std::string("exact mode requested but ") + e.what());
    }
  }
  return verify(spec, g, p, o.tol);
}

int cmd_verify(const Options& o, std::ostream& out) {
  if (o.game.empty() || o.profile.empty()) throw InputError("verify needs --game and --profile");
  const ValuationSpec spec = load_spec(o.valuation);
  const AnyGame g = load_game(o.game);
  const MixedProfile p = profile_from_json(load_json_file(o.profile));
  auto rep = with_game(g, [&](const auto& game) { return verify_with_mode(spec, game, p, o); });
  emit(o, out, envelope("verify", o, to_json(rep)));
  return rep.is_equilibrium() ? kExitOk : kExitNegative;
}

int cmd_solve(const Options& o, std::ostream& out) {
  if (o.game.empty()) throw InputError("solve needs a game file");
  const ValuationSpec spec = load_spec(o.valuation);
  const AnyGame g = load_game(o.game);
  Json result;
  bool positive = false;
  if (o.method == "pure") {
    auto res = with_game(g, [&](const auto& game) { return pure_equilibria(spec, game, o.tol); });
    positive = !res.found.empty();
    result = to_json(res);
  } else if (o.method == "support2p") {
    SupportOptions so;
    so.max_support_size = o.max_support;
    so.max_pairs = o.max_pairs;
    auto res = with_game(g, [&](const auto& game) { return support_enumeration_2p(spec, game, o.tol, so); });
    positive = !res.found.empty();
    result = to_json(res);
  } else if (o.method == "grid") {
    GridOptions go;
    go.workers = o.workers;
    for (const auto& path : o.seed_profiles) go.extra_candidates.push_back(profile_from_json(load_json_file(path)));
    auto res = with_game(g, [&](const auto& game) { return grid_search(spec, game, o.resolution, o.grid_tol, go); });
    positive = !res.found.empty();
    result = to_json(res);
  } else if (o.method == "dynamics") {
    auto res = with_game(g, [&](const auto& game) {
      PureProfile start = o.start.empty() ? PureProfile(game.num_players(), 0) : parse_index_list(o.start, "--start");
      return best_response_dynamics(spec, game, start, o.max_steps, o.tol);
    });
    Json path = Json::array(), cycle = Json::array();
    for (const auto& s : res.path) path.push_back(s);
    for (const auto& s : res.cycle) cycle.push_back(s);
    result = Json{{"outcome", to_string(res.kind)}, {"steps", res.steps}, {"path", path}, {"cycle", cycle}};
    positive = res.kind == DynamicsResult::Kind::kConverged;
  } else {
    throw InputError("unknown method '" + o.method + "' (pure, support2p, grid, dynamics)");
  }
  emit(o, out, envelope("solve", o, std::move(result)));
  return positive ? kExitOk : kExitNegative;
}

std::vector<MixedProfile> verified_profiles(const ValuationSpec& spec, const AnyGame& g, const Options& o) {
  if (o.profile.empty()) throw InputError("this check needs --profile with a verified equilibrium");
  MixedProfile p = profile_from_json(load_json_file(o.profile));
  auto rep = with_game(g, [&](const auto& game) { return verify(spec, game, p, o.tol); });
  if (!rep.is_equilibrium()) throw InputError("--profile does not pass verify");
  return {p};
}

int cmd_check(const Options& o, std::ostream& out) {
  const std::string& name = o.property;
  auto spec = [&] { return load_spec(o.valuation); };
  auto random_or_given = [&]() -> AnyGame {
    if (!o.game.empty()) return load_game(o.game);
    Rng rng(o.seed);
    return AnyGame{random_game(rng, {2, 3}), std::nullopt};
  };
  PropertyReport rep;
  if (name == "risk-positivity") {
    AnyGame g = random_or_given();
    rep = with_game(g, [&](const auto& game) { return check_risk_positivity(spec(), game, o.samples, o.seed, o.tol); });
  } else if (name == "e-strict-concavity") {
    AnyGame g = random_or_given();
    rep = with_game(g, [&](const auto& game) {
      return check_e_strict_concavity(spec(), game, o.player, o.samples, o.seed, o.tol);
    });
  } else if (name == "wee-at-equilibria") {
    if (o.game.empty()) throw InputError("wee-at-equilibria needs --game");
    AnyGame g = load_game(o.game);
    auto eqs = verified_profiles(spec(), g, o);
    rep = with_game(g, [&](const auto& game) { return check_wee_at_equilibria(spec(), game, eqs, o.tol); });
  } else if (name == "mphpn") {
    if (o.game.empty()) throw InputError("mphpn needs --game with a scheduling game");
    AnyGame g = load_game(o.game);
    if (!g.sched) throw InputError("mphpn needs a scheduling game");
    auto eqs = verified_profiles(spec(), g, o);
    rep = check_mphpn(spec(), *g.sched, eqs, o.tol);
  } else if (name == "optimal-value") {
    if (o.game.empty()) throw InputError("optimal-value needs --game");
    AnyGame g = load_game(o.game);
    auto eqs = verified_profiles(spec(), g, o);
    rep = with_game(g, [&](const auto& game) {
      return check_optimal_value(spec(), game, o.player, eqs.front(), o.samples, o.seed, o.tol);
    });
  } else if (name == "conditions-2ab") {
    ValuationSpec s = spec();
    Rational delta = o.delta.empty() ? delta_for(s) : parse_rational(o.delta, "--delta");
    rep = check_conditions_2ab(s, delta, o.steps_a, o.steps_b, o.tol);
  } else if (name == "two-values-monotonicity") {
    rep = check_two_values_monotonicity(spec(), 8, 4, o.steps_b, o.tol);
  } else if (name == "embracing-geometric") {
    rep = check_embracing_and_geometric();
  } else if (name == "f-identities") {
    rep = check_f_identities();
  } else if (name == "crawford-nonexistence") {
    Rational delta = parse_rational(o.delta.empty() ? "1/4" : o.delta, "--delta");
    rep = check_crawford_nonexistence(spec(), delta, o.resolution, o.grid_tol, o.tol);
  } else if (name == "fp-counterexample") {
    rep = check_fp_counterexample();
  } else if (name == "moment-formula") {
    rep = check_moment_formula(o.samples, o.seed);
  } else {
    throw InputError("unknown property '" + name + "'");
  }
  emit(o, out, envelope("check", o, to_json(rep)));
  return rep.passed ? kExitOk : kExitNegative;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Risk-averse valuations, equilibria, and hardness gadgets for finite games", "riskeq"};
  app.require_subcommand(1);

  auto add_valuation = [&](CLI::App* c) {
    c->add_option("--valuation", o.valuation, "shorthand like e+var:gamma=1, or a JSON file")->capture_default_str();
  };
  auto add_output = [&](CLI::App* c) { c->add_option("-o,--output", o.output, "write to file instead of stdout"); };
  auto add_tol = [&](CLI::App* c) { c->add_option("--tol", o.tol, "float comparison tolerance")->capture_default_str(); };

  auto* gadget = app.add_subcommand("gadget", "construct a game or reduction instance");
  gadget->add_option("kind", o.kind, "crawford | sat | mbp-from-3dm | sched-from-mbp | three-player | fp-counterexample")
      ->required();
  gadget->add_option("input", o.input, "input file (3DM text or MBP JSON)");
  gadget->add_option("--delta", o.delta, "delta as p/q");
  gadget->add_option("--cnf", o.cnf, "DIMACS CNF file");
  add_valuation(gadget);
  add_output(gadget);

  auto* lift = app.add_subcommand("lift", "lift a solution to an equilibrium profile");
  lift->add_option("kind", o.kind, "sat-assignment | mbp-solution")->required();
  lift->add_option("input", o.input, "MBP JSON file");
  lift->add_option("--cnf", o.cnf, "DIMACS CNF file");
  lift->add_option("--assign", o.assign, "one 0/1 digit per variable, e.g. 11");
  lift->add_option("--rows", o.rows, "1-based MBP rows, e.g. 1,2");
  add_valuation(lift);
  add_output(lift);

  auto* solve = app.add_subcommand("solve", "search for equilibria");
  solve->add_option("game", o.game, "game JSON (normal form or scheduling)")->required();
  solve->add_option("--method", o.method, "pure | support2p | grid | dynamics")->capture_default_str();
  solve->add_option("--resolution", o.resolution, "grid step")->capture_default_str();
  solve->add_option("--grid-tol", o.grid_tol, "grid acceptance tolerance")->capture_default_str();
  solve->add_option("--max-support", o.max_support, "largest support size (0: all)")->capture_default_str();
  solve->add_option("--max-pairs", o.max_pairs, "support-pair budget")->capture_default_str();
  solve->add_option("--start", o.start, "dynamics start profile, e.g. 0,0");
  solve->add_option("--max-steps", o.max_steps, "dynamics step bound")->capture_default_str();
  solve->add_option("--seed-profile", o.seed_profiles, "extra grid candidates (profile JSON)");
  solve->add_option("--workers", o.workers, "worker threads (default: RISKEQ_WORKERS or all cores)");
  add_valuation(solve);
  add_tol(solve);
  add_output(solve);

  auto* ver = app.add_subcommand("verify", "check a profile for pure deviations");
  ver->add_option("--game", o.game, "game JSON")->required();
  ver->add_option("--profile", o.profile, "profile JSON")->required();
  ver->add_option("--mode", o.mode, "auto | exact | float")->check(CLI::IsMember({"auto", "exact", "float"}))
      ->capture_default_str();
  add_valuation(ver);
  add_tol(ver);
  add_output(ver);

  auto* check = app.add_subcommand("check", "run a property suite");
  check->add_option("property", o.property,
                    "risk-positivity | e-strict-concavity | wee-at-equilibria | mphpn | optimal-value | "
                    "conditions-2ab | two-values-monotonicity | embracing-geometric | f-identities | "
                    "crawford-nonexistence | fp-counterexample | moment-formula")
      ->required();
  check->add_option("--delta", o.delta, "delta as p/q");
  check->add_option("--seed", o.seed, "random seed")->capture_default_str();
  check->add_option("--samples", o.samples, "samples or instances")->capture_default_str();
  check->add_option("--player", o.player, "player index")->capture_default_str();
  check->add_option("--steps-a", o.steps_a, "q-grid denominator for condition 2/a")->capture_default_str();
  check->add_option("--steps-b", o.steps_b, "grid denominator for condition 2/b and q-grids")->capture_default_str();
  check->add_option("--resolution", o.resolution, "grid step")->capture_default_str();
  check->add_option("--game", o.game, "game JSON (default: random game from --seed)");
  check->add_option("--profile", o.profile, "equilibrium profile JSON");
  add_valuation(check);
  add_tol(check);
  add_output(check);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error[usage]: " << e.what() << "\n";
    err << "run 'riskeq --help' for usage\n";
    return kExitError;
  }

  try {
    if (*gadget) return cmd_gadget(o, out);
    if (*lift) return cmd_lift(o, out);
    if (*solve) return cmd_solve(o, out);
    if (*ver) return cmd_verify(o, out);
    if (*check) return cmd_check(o, out);
  } catch (const InputError& e) {
    err << "error[input]: " << e.what() << "\n";
  } catch (const ModeRequestError& e) {
    err << "error[mode]: " << e.what() << "\n";
  } catch (const ParseError& e) {
    err << "error[parse]: " << e.what() << "\n";
  } catch (const SchemaError& e) {
    err << "error[schema]: " << e.what() << "\n";
  } catch (const BudgetExceeded& e) {
    err << "error[budget]: " << e.what() << "\n";
  } catch (const IoError& e) {
    err << "error[io]: " << e.what() << "\n";
  } catch (const Json::exception& e) {
    err << "error[schema]: " << e.what() << "\n";
  } catch (const SpecError& e) {
    err << "error[valuation]: " << e.what() << "\n";
  } catch (const NotConcaveError& e) {
    err << "error[valuation]: " << e.what() << "\n";
  } catch (const DimensionError& e) {
    err << "error[dimension]: " << e.what() << "\n";
  } catch (const ModeError& e) {
    err << "error[mode]: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    err << "error[input]: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error[internal]: " << e.what() << "\n";
  }
  return kExitError;
}

}  // namespace riskeq::cli
