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

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "riskeq/equilibrium.hpp"
#include "riskeq/gadgets.hpp"
#include "riskeq/game.hpp"
#include "riskeq/scheduling.hpp"
#include "riskeq/valuation.hpp"

namespace riskeq {

using Json = nlohmann::ordered_json;

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kSchemaVersion = 1;

// Exact scalars as "p/q" strings, floats as JSON numbers.
inline Json to_json(const Scalar& x) {
  if (x.is_exact()) return x.to_string();
  return x.to_double();
}

inline Scalar scalar_from_json(const Json& j) {
  if (j.is_string()) {
    try {
      return Scalar::parse(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw SchemaError(e.what());
    }
  }
  if (j.is_number()) return Scalar::real(j.get<double>());
  throw SchemaError("expected a number or a \"p/q\" string, got " + j.dump());
}

inline Rational rational_from_json(const Json& j) {
  Scalar s = j.is_number_integer() ? Scalar::exact(j.get<long>()) : scalar_from_json(j);
  if (!s.is_exact()) throw SchemaError("expected an exact rational, got " + j.dump());
  return s.rational();
}

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file '" + path + "'");
  out << text;
}

namespace detail {

inline const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline std::string join_labels(const Game& g, const PureProfile& s) {
  std::string key;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) key += ',';
    key += g.label(i, s[i]);
  }
  return key;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Game

inline Json to_json(const Game& g) {
  Json j;
  j["players"] = g.num_players();
  j["strategies"] = g.labels();
  Json costs = Json::object();
  PureProfile s(g.num_players(), 0);
  do {
    Json row = Json::array();
    for (std::size_t i = 0; i < g.num_players(); ++i) row.push_back(to_json(g.cost(i, s)));
    costs[detail::join_labels(g, s)] = std::move(row);
  } while (g.advance(s));
  j["costs"] = std::move(costs);
  return j;
}

inline Game game_from_json(const Json& j) {
  try {
    const std::size_t n = detail::require(j, "players").get<std::size_t>();
    auto labels = detail::require(j, "strategies").get<std::vector<std::vector<std::string>>>();
    if (labels.size() != n) throw SchemaError("\"strategies\" lists " + std::to_string(labels.size()) +
                                             " players, \"players\" says " + std::to_string(n));
    for (const auto& ls : labels)
      for (const auto& l : ls)
        if (l.find(',') != std::string::npos) throw SchemaError("strategy label '" + l + "' contains a comma");
    const Json& costs = detail::require(j, "costs");
    if (!costs.is_object()) throw SchemaError("\"costs\" must be an object");
    std::size_t expected = 1;
    for (const auto& ls : labels) expected *= ls.size();
    if (costs.size() != expected)
      throw SchemaError("\"costs\" has " + std::to_string(costs.size()) + " profiles, expected " +
                        std::to_string(expected));
    return Game::from_function(labels, [&](const PureProfile& s) {
      std::string key;
      for (std::size_t i = 0; i < s.size(); ++i) key += (i ? "," : "") + labels[i][s[i]];
      if (!costs.contains(key)) throw SchemaError("missing cost entry for profile \"" + key + "\"");
      const Json& row = costs.at(key);
      if (!row.is_array() || row.size() != n)
        throw SchemaError("cost entry \"" + key + "\" must list " + std::to_string(n) + " values");
      std::vector<Scalar> c;
      for (const auto& v : row) c.push_back(scalar_from_json(v));
      return c;
    });
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("malformed game: ") + e.what());
  } catch (const ModeError& e) {
    throw SchemaError(std::string("malformed game: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Profiles

inline Json to_json(const MixedProfile& p) {
  Json rows = Json::array();
  for (const auto& row : p.probs) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(to_json(v));
    rows.push_back(std::move(r));
  }
  return Json{{"probabilities", std::move(rows)}};
}

inline MixedProfile profile_from_json(const Json& j) {
  const Json& rows = detail::require(j, "probabilities");
  if (!rows.is_array()) throw SchemaError("\"probabilities\" must be an array");
  MixedProfile p;
  for (const auto& r : rows) {
    if (!r.is_array() || r.empty()) throw SchemaError("each player needs a nonempty probability list");
    std::vector<Scalar> row;
    for (const auto& v : r) row.push_back(scalar_from_json(v));
    p.probs.push_back(std::move(row));
  }
  Mode m = p.mode();
  for (const auto& row : p.probs)
    for (const auto& v : row)
      if (v.mode() != m) throw SchemaError("profile mixes exact and float entries");
  return p;
}

// ---------------------------------------------------------------------------
// Valuation specs

inline Json to_json(const ValuationSpec& spec) {
  Json j;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Expectation>) {
          j["kind"] = "e";
        } else if constexpr (std::is_same_v<T, VarRisk>) {
          j["kind"] = "e+var";
          j["gamma"] = v.gamma.get_str();
        } else if constexpr (std::is_same_v<T, SdRisk>) {
          j["kind"] = "e+sd";
          j["gamma"] = v.gamma.get_str();
        } else if constexpr (std::is_same_v<T, MomentSum>) {
          j["kind"] = "moments";
          Json a = Json::object();
          a["0"] = v.alpha0.get_str();
          for (const auto& [k, w] : v.alpha) a[std::to_string(k)] = w.get_str();
          j["alpha"] = std::move(a);
          j["asserted_concave"] = v.asserted_concave;
        } else if constexpr (std::is_same_v<T, NuPower>) {
          j["kind"] = "nu";
          j["r"] = v.r;
        } else {
          j["kind"] = "combo";
          j["lambda"] = v.lambda.get_str();
          j["gamma"] = v.gamma.get_str();
          j["r"] = v.r;
        }
      },
      spec);
  return j;
}

inline ValuationSpec spec_from_json(const Json& j) {
  try {
    const std::string kind = detail::require(j, "kind").get<std::string>();
    auto rat = [&](const char* key, Rational dflt) {
      return j.contains(key) ? rational_from_json(j.at(key)) : dflt;
    };
    auto uint = [&](const char* key, unsigned dflt) {
      if (!j.contains(key)) return dflt;
      long r = j.at(key).get<long>();
      if (r < 0) throw SchemaError(std::string("\"") + key + "\" must be nonnegative");
      return static_cast<unsigned>(r);
    };
    ValuationSpec spec;
    if (kind == "e") {
      spec = Expectation{};
    } else if (kind == "e+var") {
      spec = VarRisk{rat("gamma", 1)};
    } else if (kind == "e+sd") {
      spec = SdRisk{rat("gamma", 1)};
    } else if (kind == "moments") {
      MomentSum ms;
      if (j.contains("alpha")) {
        for (const auto& [key, val] : j.at("alpha").items()) {
          unsigned k = static_cast<unsigned>(std::stoul(key));
          if (k == 0)
            ms.alpha0 = rational_from_json(val);
          else
            ms.alpha[k] = rational_from_json(val);
        }
      }
      if (j.contains("asserted_concave")) ms.asserted_concave = j.at("asserted_concave").get<bool>();
      spec = ms;
    } else if (kind == "nu") {
      spec = NuPower{uint("r", 2)};
    } else if (kind == "combo") {
      spec = Combo{rat("lambda", Rational(1, 2)), rat("gamma", 1), uint("r", 2)};
    } else {
      throw SchemaError("unknown valuation kind '" + kind + "'");
    }
    validate(spec);
    return spec;
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("malformed valuation: ") + e.what());
  } catch (const std::logic_error& e) {
    throw SchemaError(std::string("malformed valuation: ") + e.what());
  }
}

// Shorthands: "e", "e+var:gamma=1", "e+sd:gamma=1/2",
// "moments:a0=1,a2=1,a4=1[,concave=false]", "nu:r=3",
// "combo:lambda=1/2,gamma=1,r=2".
inline ValuationSpec parse_spec_shorthand(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  Json j;
  j["kind"] = kind;
  if (colon != std::string::npos) {
    std::stringstream ss(text.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw SchemaError("expected key=value in valuation, got '" + item + "'");
      const std::string key = item.substr(0, eq), val = item.substr(eq + 1);
      if (kind == "moments" && key.size() >= 2 && key[0] == 'a') {
        j["alpha"][key.substr(1)] = val;
      } else if (kind == "moments" && key == "concave") {
        if (val != "true" && val != "false") throw SchemaError("concave must be true or false");
        j["asserted_concave"] = val == "true";
      } else if (key == "r") {
        try {
          j["r"] = std::stol(val);
        } catch (const std::exception&) {
          throw SchemaError("r must be an integer, got '" + val + "'");
        }
      } else if (key == "gamma" || key == "lambda") {
        j[key] = val;
      } else {
        throw SchemaError("unknown valuation parameter '" + key + "' for kind '" + kind + "'");
      }
    }
  }
  return spec_from_json(j);
}

// ---------------------------------------------------------------------------
// Scheduling games and MBP instances

inline Json to_json(const SchedulingGame& g) {
  Json omega = Json::array();
  for (std::size_t i = 0; i < g.num_players(); ++i) {
    Json row = Json::array();
    for (std::size_t o = 0; o < g.num_players(); ++o) {
      Json w = Json::array();
      for (std::size_t l = 0; l < g.num_links(); ++l) w.push_back(g.weight(i, o, l));
      row.push_back(std::move(w));
    }
    omega.push_back(std::move(row));
  }
  return Json{{"n", g.num_players()}, {"m", g.num_links()}, {"omega", std::move(omega)},
              {"names", g.player_names()}};
}

inline SchedulingGame scheduling_from_json(const Json& j) {
  try {
    const std::size_t n = detail::require(j, "n").get<std::size_t>();
    const std::size_t m = detail::require(j, "m").get<std::size_t>();
    const Json& omega = detail::require(j, "omega");
    SchedulingGame g(n, m);
    if (!omega.is_array() || omega.size() != n) throw SchemaError("\"omega\" must have n rows");
    for (std::size_t i = 0; i < n; ++i) {
      if (!omega[i].is_array() || omega[i].size() != n) throw SchemaError("\"omega\" rows must have n entries");
      for (std::size_t o = 0; o < n; ++o) {
        if (!omega[i][o].is_array() || omega[i][o].size() != m)
          throw SchemaError("\"omega\" cells must list m link weights");
        for (std::size_t l = 0; l < m; ++l) g.set_weight(i, o, l, omega[i][o][l].get<long>());
      }
    }
    if (j.contains("names")) g.set_player_names(j.at("names").get<std::vector<std::string>>());
    return g;
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("malformed scheduling game: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("malformed scheduling game: ") + e.what());
  }
}

inline Json to_json(const MbpInstance& inst) {
  return Json{{"n", inst.n}, {"m", inst.m}, {"A", inst.a}};
}

inline MbpInstance mbp_from_json(const Json& j) {
  try {
    MbpInstance inst;
    inst.n = detail::require(j, "n").get<std::size_t>();
    inst.m = detail::require(j, "m").get<std::size_t>();
    inst.a = detail::require(j, "A").get<std::vector<std::vector<long>>>();
    validate(inst);
    return inst;
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("malformed MBP instance: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("malformed MBP instance: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Reports

inline Json to_json(const EquilibriumReport& rep) {
  Json players = Json::array();
  for (std::size_t i = 0; i < rep.players.size(); ++i) {
    const auto& pc = rep.players[i];
    Json devs = Json::array();
    for (const auto& v : pc.deviation_values) devs.push_back(to_json(v));
    players.push_back(Json{{"player", i},
                           {"value", to_json(pc.value)},
                           {"best_deviation", pc.best_deviation},
                           {"best_deviation_value", to_json(pc.best_value)},
                           {"slack", to_json(pc.slack)},
                           {"deviation_values", std::move(devs)}});
  }
  Json verdict;
  if (rep.violation)
    verdict = Json{{"verdict", "violated"},
                   {"player", rep.violation->player},
                   {"strategy", rep.violation->strategy},
                   {"improvement", to_json(rep.violation->improvement)}};
  else
    verdict = Json{{"verdict", "equilibrium"}};
  return Json{{"profile", to_json(rep.profile)["probabilities"]},
              {"players", std::move(players)},
              {"result", std::move(verdict)},
              {"mode", to_string(rep.mode)},
              {"tol", rep.tol}};
}

inline Json to_json(const SearchResult& res) {
  Json found = Json::array();
  for (const auto& r : res.found) found.push_back(to_json(r));
  return Json{{"found", std::move(found)},
              {"exhausted", res.exhausted},
              {"candidate_space", res.candidate_space},
              {"candidates_checked", res.candidates_checked}};
}

}  // namespace riskeq
