// Copyright 2026 The GBDP Authors
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


// Run configuration. Schema (unknown keys are errors):
//
//   {
//     "problem": {
//       "type": "ahd",
//       "lambda": 0.008, "r": 34.53, "d_lo": 0, "d_hi": 10, "c_unit": 0.083,
//       "x_bar": [6, 6, ...], "t_bar": 6990,
//       "beta": {"source": "synthetic", "beta_c": 0, "beta_s": [0, ...], "beta_d": -0.3},
//       "price_grid": [..]                                  (optional)
//     },
//     "solver": {"i_max": 100, "seed": 42, "resample_mode": "off",
//                "eps_opt": 0, "cut_anchor": "next", "stale_continuation": false},
//     "output_dir": "out",                                  (optional)
//     "replications": 1000                                  (optional)
//   }
//
// Every solver key is optional and defaults to SolverConfig's value.

#pragma once

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <set>
#include <string>

#include <json.hpp>

#include "gbdp/ahd.hpp"
#include "gbdp/problem.hpp"
#include "gbdp/solver.hpp"

namespace gbdp::io {

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  ahd::MnlParams problem;
  /// Provenance label of the choice-model coefficients, e.g. "synthetic".
  std::string beta_source;
  SolverConfig solver;
  std::string output_dir = "out";
  std::size_t replications = 1000;
};

namespace detail {

using nlohmann::json;

inline void require_keys(const json& obj, const std::string& where, std::initializer_list<const char*> required,
                         std::initializer_list<const char*> optional = {}) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  std::set<std::string> allowed;
  for (const char* k : required) {
    allowed.insert(k);
    if (!obj.contains(k)) throw ConfigError(where + ": missing key '" + k + "'");
  }
  for (const char* k : optional) allowed.insert(k);
  for (const auto& item : obj.items()) {
    if (!allowed.contains(item.key())) throw ConfigError(where + ": unknown key '" + item.key() + "'");
  }
}

inline double number(const json& obj, const char* key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return v.get<double>();
}

// Literals built in C++ are signed; parsed text gives unsigned.
inline bool is_nonnegative_integer(const json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0);
}

inline long long integer(const json& obj, const char* key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return v.get<long long>();
}

inline std::vector<double> numbers(const json& obj, const char* key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(where + "." + key + ": expected an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(where + "." + key + ": expected numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

inline ahd::MnlParams parse_problem(const json& p, std::string& beta_source) {
  const std::string where = "problem";
  require_keys(p, where, {"type", "lambda", "r", "d_lo", "d_hi", "c_unit", "x_bar", "t_bar", "beta"}, {"price_grid"});
  if (!p["type"].is_string() || p["type"].get<std::string>() != "ahd") {
    throw ConfigError("problem.type: only \"ahd\" is supported");
  }
  ahd::MnlParams m;
  m.lambda = number(p, "lambda", where);
  m.r = number(p, "r", where);
  m.d_lo = number(p, "d_lo", where);
  m.d_hi = number(p, "d_hi", where);
  m.c_unit = number(p, "c_unit", where);
  const long long t_bar = integer(p, "t_bar", where);
  if (t_bar < 1 || t_bar > 100000000) throw ConfigError("problem.t_bar: out of range");
  m.t_bar = static_cast<int>(t_bar);

  const json& xb = p["x_bar"];
  if (!xb.is_array() || xb.empty()) throw ConfigError("problem.x_bar: expected a nonempty array");
  std::vector<int> upper;
  for (const auto& e : xb) {
    if (!e.is_number_integer() || e.get<long long>() < 0 || e.get<long long>() > 1000000) {
      throw ConfigError("problem.x_bar: expected nonnegative integers");
    }
    upper.push_back(e.get<int>());
  }
  m.x_bar = StateVec(std::move(upper));

  const json& beta = p["beta"];
  require_keys(beta, "problem.beta", {"source", "beta_c", "beta_s", "beta_d"});
  if (!beta["source"].is_string()) throw ConfigError("problem.beta.source: expected a string");
  beta_source = beta["source"].get<std::string>();
  m.beta_c = number(beta, "beta_c", "problem.beta");
  m.beta_s = numbers(beta, "beta_s", "problem.beta");
  m.beta_d = number(beta, "beta_d", "problem.beta");

  if (p.contains("price_grid")) m.price_grid = numbers(p, "price_grid", where);
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return m;
}

inline SolverConfig parse_solver(const json& s) {
  const std::string where = "solver";
  require_keys(s, where, {}, {"i_max", "seed", "resample_mode", "eps_opt", "cut_anchor", "stale_continuation"});
  SolverConfig c;
  if (s.contains("i_max")) {
    const long long i = integer(s, "i_max", where);
    if (i < 1 || i > 100000000) throw ConfigError("solver.i_max: out of range");
    c.i_max = static_cast<int>(i);
  }
  if (s.contains("seed")) {
    const json& v = s["seed"];
    if (!is_nonnegative_integer(v)) throw ConfigError("solver.seed: expected a nonnegative integer");
    c.seed = v.get<std::uint64_t>();
  }
  if (s.contains("resample_mode")) {
    const json& v = s["resample_mode"];
    const std::string mode = v.is_string() ? v.get<std::string>() : "";
    if (mode == "off") {
      c.resample_mode = ResampleMode::off;
    } else if (mode == "oracle_assisted") {
      c.resample_mode = ResampleMode::oracle_assisted;
    } else {
      throw ConfigError("solver.resample_mode: expected \"off\" or \"oracle_assisted\"");
    }
  }
  if (s.contains("eps_opt")) c.eps_opt = number(s, "eps_opt", where);
  if (s.contains("cut_anchor")) {
    const json& v = s["cut_anchor"];
    const std::string anchor = v.is_string() ? v.get<std::string>() : "";
    if (anchor == "next") {
      c.cut_anchor = CutAnchor::next;
    } else if (anchor == "current") {
      c.cut_anchor = CutAnchor::current;
    } else {
      throw ConfigError("solver.cut_anchor: expected \"next\" or \"current\"");
    }
  }
  if (s.contains("stale_continuation")) {
    if (!s["stale_continuation"].is_boolean()) throw ConfigError("solver.stale_continuation: expected a boolean");
    c.stale_continuation = s["stale_continuation"].get<bool>();
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

}  // namespace detail

inline RunConfig parse_run_config(const nlohmann::json& root) {
  detail::require_keys(root, "config", {"problem"}, {"solver", "output_dir", "replications"});
  RunConfig cfg;
  cfg.problem = detail::parse_problem(root["problem"], cfg.beta_source);
  if (root.contains("solver")) cfg.solver = detail::parse_solver(root["solver"]);
  if (root.contains("output_dir")) {
    if (!root["output_dir"].is_string()) throw ConfigError("output_dir: expected a string");
    cfg.output_dir = root["output_dir"].get<std::string>();
  }
  if (root.contains("replications")) {
    if (!detail::is_nonnegative_integer(root["replications"])) throw ConfigError("replications: expected a nonnegative integer");
    cfg.replications = root["replications"].get<std::size_t>();
  }
  return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/false);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_run_config(root);
}

}  // namespace gbdp::io
