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


// Cut checkpoints as JSON lines: {"t":..,"iter":..,"a":[..],"b":..}, one per
// cut, stages in increasing t and cuts in insertion order.

#pragma once

#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gbdp/io/format.hpp"
#include "gbdp/problem.hpp"
#include "gbdp/pwa_value.hpp"

namespace gbdp::io {

class CheckpointError : public Error {
 public:
  using Error::Error;
};

inline void write_cuts(std::ostream& out, const ValueStack& stack) {
  for (int t = 1; t <= stack.t_bar(); ++t) {
    const PwaValue& q = stack.stage(t);
    for (std::size_t j = 0; j < q.size(); ++j) {
      const Hyperplane& h = q.cuts()[j];
      out << "{\"t\":" << t << ",\"iter\":" << q.iterations()[j] << ",\"a\":[";
      for (std::size_t s = 0; s < h.slope.size(); ++s) {
        if (s > 0) out << ',';
        out << format_double(h.slope[s]);
      }
      out << "],\"b\":" << format_double(h.offset) << "}\n";
    }
  }
}

inline void save_cuts(const std::string& path, const ValueStack& stack) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot write checkpoint " + path);
  write_cuts(out, stack);
  if (!out) throw CheckpointError("failed writing checkpoint " + path);
}

/// Rebuilds a stack of horizon t_bar over n dimensions. Every stage must
/// receive at least one cut.
inline ValueStack read_cuts(std::istream& in, int t_bar, std::size_t n, ValueStack::Terminal terminal) {
  if (t_bar < 1) throw CheckpointError("checkpoint: horizon must be >= 1");
  std::vector<PwaValue> stages(static_cast<std::size_t>(t_bar));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "checkpoint line " + std::to_string(line_no);
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw CheckpointError(where + ": " + e.what());
    }
    if (!rec.is_object() || rec.size() != 4 || !rec.contains("t") || !rec.contains("iter") || !rec.contains("a") ||
        !rec.contains("b")) {
      throw CheckpointError(where + ": expected exactly the fields t, iter, a, b");
    }
    if (!rec["t"].is_number_integer() || !rec["iter"].is_number_integer() || !rec["a"].is_array() ||
        !rec["b"].is_number()) {
      throw CheckpointError(where + ": field of the wrong type");
    }
    const int t = rec["t"].get<int>();
    if (t < 1 || t > t_bar) throw CheckpointError(where + ": t outside 1.." + std::to_string(t_bar));
    if (rec["a"].size() != n) throw CheckpointError(where + ": slope has the wrong dimension");
    Hyperplane h;
    for (const auto& v : rec["a"]) {
      if (!v.is_number()) throw CheckpointError(where + ": slope entries must be numbers");
      h.slope.push_back(v.get<double>());
    }
    h.offset = rec["b"].get<double>();
    try {
      stages[static_cast<std::size_t>(t - 1)].add_cut(std::move(h), rec["iter"].get<int>());
    } catch (const std::invalid_argument& e) {
      throw CheckpointError(where + ": " + e.what());
    }
  }
  for (std::size_t t = 0; t < stages.size(); ++t) {
    if (stages[t].empty()) throw CheckpointError("checkpoint has no cut for t = " + std::to_string(t + 1));
  }
  return ValueStack(std::move(stages), std::move(terminal));
}

inline ValueStack load_cuts(const std::string& path, int t_bar, std::size_t n, ValueStack::Terminal terminal) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot read checkpoint " + path);
  return read_cuts(in, t_bar, n, std::move(terminal));
}

}  // namespace gbdp::io
