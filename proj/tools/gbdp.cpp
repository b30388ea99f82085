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


// gbdp: train, simulate, exact and verify subcommands.
//
// Exit codes: 0 success, 1 verification failed, 2 usage/config/checkpoint
// error, 3 runtime failure, 4 exact solve refused by the cap.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gbdp.hpp"
#include "gbdp/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kRuntime = 3, kCapExceeded = 4 };

struct Common {
  std::string config;
  std::optional<std::string> out;
};

std::string output_dir(const Common& c, const gbdp::io::RunConfig& cfg) {
  const std::string dir = c.out.value_or(cfg.output_dir);
  fs::create_directories(dir);
  return dir;
}

gbdp::ValueStack::Terminal terminal_of(const gbdp::ahd::AhdProblem& problem) {
  return [problem](const gbdp::StateVec& x) { return problem.terminal_value(x); };
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  out << j.dump(2) << '\n';
  if (!out) throw gbdp::Error("failed writing " + path.string());
}

struct TrainArgs {
  Common common;
  std::optional<std::uint64_t> seed;
  std::optional<int> iters;
  bool reproducible = false;
  std::optional<std::string> exact;
};

int run_train(const TrainArgs& a) {
  const auto cfg = gbdp::io::load_run_config(a.common.config);
  gbdp::SolverConfig solver = cfg.solver;
  if (a.seed) solver.seed = *a.seed;
  if (a.iters) solver.i_max = *a.iters;
  solver.validate();
  const gbdp::ahd::AhdProblem problem(cfg.problem);

  std::optional<gbdp::ExactValueTable> table;
  if (solver.resample_mode == gbdp::ResampleMode::oracle_assisted) {
    table = a.exact ? gbdp::io::load_exact(*a.exact) : gbdp::exact_solve(problem);
    if (table->space().upper() != problem.space().upper() || table->t_bar() != problem.horizon().t_bar) {
      throw gbdp::io::CheckpointError("exact table does not match the config");
    }
  }

  const fs::path dir = output_dir(a.common, cfg);
  std::ofstream trace(dir / "trace.csv");
  if (!trace) throw gbdp::Error("cannot write " + (dir / "trace.csv").string());
  trace << gbdp::io::kTraceHeader << '\n' << std::flush;

  double total_ms = 0.0;
  const auto result = gbdp::train(
      problem, solver,
      [&](const gbdp::IterationRecord& r, const gbdp::ValueStack&) {
        gbdp::io::write_trace_row(trace, r, a.reproducible);
        trace.flush();
        total_ms += r.wall_ms;
        std::fprintf(stderr, "iter %d  l=%.4f  u=%.6f  case2=%d\n", r.iter, r.lower_sample, r.upper_bound,
                     r.case2_count);
      },
      table ? &*table : nullptr);

  gbdp::io::save_cuts((dir / "cuts.jsonl").string(), result.stack);
  std::vector<double> lower;
  for (const auto& r : result.trace) lower.push_back(r.lower_sample);
  const auto stats = gbdp::io::sample_stats(lower);
  write_json(dir / "summary.json", json{{"final_u", result.trace.back().upper_bound},
                                        {"mean_l", stats.mean},
                                        {"sd_l", stats.sd},
                                        {"iters", result.trace.size()},
                                        {"total_wall_ms", a.reproducible ? 0.0 : total_ms}});
  std::printf("u = %.17g\n", result.trace.back().upper_bound);
  return kOk;
}

struct SimulateArgs {
  Common common;
  std::string checkpoint;
  std::optional<std::size_t> n;
  std::optional<std::uint64_t> seed;
};

int run_simulate(const SimulateArgs& a) {
  const auto cfg = gbdp::io::load_run_config(a.common.config);
  const gbdp::ahd::AhdProblem problem(cfg.problem);
  const auto stack =
      gbdp::io::load_cuts(a.checkpoint, problem.horizon().t_bar, problem.space().dim(), terminal_of(problem));
  const std::size_t n = a.n.value_or(cfg.replications);
  const std::uint64_t seed = a.seed.value_or(cfg.solver.seed);
  const auto profits = gbdp::simulate(problem, stack, n, seed);

  const fs::path dir = output_dir(a.common, cfg);
  {
    std::ofstream out(dir / "profits.csv");
    gbdp::io::write_profits(out, profits);
  }
  {
    std::ofstream out(dir / "histogram.csv");
    gbdp::io::write_histogram(out, gbdp::io::histogram(profits));
  }
  // Merged into an existing summary (e.g. from train) rather than replacing it.
  json summary = json::object();
  if (std::ifstream in(dir / "summary.json"); in) {
    try {
      summary = json::parse(in);
    } catch (const json::exception&) {
      summary = json::object();
    }
    if (!summary.is_object()) summary = json::object();
  }
  const auto stats = gbdp::io::sample_stats(profits);
  summary["mean"] = stats.mean;
  summary["sd"] = stats.sd;
  summary["replications"] = stats.count;
  write_json(dir / "summary.json", summary);
  std::printf("mean = %.17g  sd = %.17g  n = %zu\n", stats.mean, stats.sd, stats.count);
  return kOk;
}

struct ExactArgs {
  Common common;
  double cap = 1e7;
};

int run_exact(const ExactArgs& a) {
  const auto cfg = gbdp::io::load_run_config(a.common.config);
  const gbdp::ahd::AhdProblem problem(cfg.problem);
  const auto table = gbdp::exact_solve(problem, a.cap);
  const fs::path dir = output_dir(a.common, cfg);
  gbdp::io::save_exact((dir / "exact_values.bin").string(), table);
  std::printf("V_1(0) = %.17g\n", table.at(1, gbdp::StateVec(problem.space().dim())));
  return kOk;
}

struct VerifyArgs {
  Common common;
  std::string checkpoint;
  std::string exact;
};

int run_verify(const VerifyArgs& a) {
  const auto cfg = gbdp::io::load_run_config(a.common.config);
  const gbdp::ahd::AhdProblem problem(cfg.problem);
  const int t_bar = problem.horizon().t_bar;
  const auto table = gbdp::io::load_exact(a.exact);
  if (table.space().upper() != problem.space().upper() || table.t_bar() != t_bar) {
    throw gbdp::io::CheckpointError("exact table does not match the config");
  }
  const auto stack = gbdp::io::load_cuts(a.checkpoint, t_bar, problem.space().dim(), terminal_of(problem));

  const auto gap = gbdp::verify_upper_bound(stack, table);
  const double tolerance = t_bar * cfg.solver.eps_opt + 1e-8;
  const bool prop1 = gap.worst_gap >= -tolerance;

  double largest_gap = 0.0;
  for (int t = 1; t <= t_bar; ++t) {
    const auto layer = table.layer(t);
    for (std::size_t i = 0; i < layer.size(); ++i) {
      largest_gap = std::max(largest_gap, stack.stage(t).evaluate(table.space().state_at(i)) - layer[i]);
    }
  }

  const auto& space = table.space();
  const double states = space.cardinality_estimate();
  json submodular = nullptr;
  json concave = nullptr;
  if (states <= 1e4) {
    bool all = true;
    for (int t = 1; t <= t_bar + 1 && all; ++t) all = gbdp::check_submodular_all(table.layer(t), space).holds;
    submodular = all;
    if (space.dim() <= 3) {
      bool ext = true;
      for (int t = 1; t <= t_bar + 1 && ext; ++t) ext = gbdp::check_concave_extensible(table.layer(t), space).holds;
      concave = ext;
    }
  }

  const json report{{"prop1_worst_gap", gap.worst_gap},
                    {"prop1_pass", prop1},
                    {"submodular_all_t", submodular},
                    {"concave_extensible_all_t", concave},
                    {"converged", largest_gap <= 1e-6},
                    {"worst_gap", gap.worst_gap},
                    {"argmin_state", std::vector<int>(gap.state.begin(), gap.state.end())},
                    {"argmin_t", gap.t}};
  const fs::path dir = output_dir(a.common, cfg);
  write_json(dir / "verify.json", report);
  std::printf("%s\n", report.dump(2).c_str());

  const bool pass = prop1 && submodular != json(false) && concave != json(false);
  return pass ? kOk : kCheckFailed;
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("config", c.config, "run configuration (JSON)")->required();
  cmd->add_option("--out", c.out, "output directory (default: output_dir from the config)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gradient-bounded dynamic programming"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "run forward/backward iterations and write trace, cuts and summary");
  add_common(train_cmd, train.common);
  train_cmd->add_option("--seed", train.seed, "root seed (overrides solver.seed)");
  train_cmd->add_option("--iters", train.iters, "iteration count (overrides solver.i_max)");
  train_cmd->add_flag("--reproducible", train.reproducible, "write wall times as 0 for byte-identical output");
  train_cmd->add_option("--exact", train.exact, "exact table for oracle-assisted resampling");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "simulate the greedy policy of a checkpoint");
  add_common(sim_cmd, sim.common);
  sim_cmd->add_option("--checkpoint", sim.checkpoint, "cuts.jsonl from train")->required();
  sim_cmd->add_option("--n", sim.n, "replications (overrides the config)");
  sim_cmd->add_option("--seed", sim.seed, "root seed (overrides solver.seed)");

  ExactArgs exact;
  auto* exact_cmd = app.add_subcommand("exact", "solve the DP by full enumeration");
  add_common(exact_cmd, exact.common);
  exact_cmd->add_option("--cap", exact.cap, "maximum state-time evaluations")->capture_default_str();

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "check a checkpoint against an exact table");
  add_common(verify_cmd, verify.common);
  verify_cmd->add_option("--checkpoint", verify.checkpoint, "cuts.jsonl from train")->required();
  verify_cmd->add_option("--exact", verify.exact, "exact_values.bin from exact")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*train_cmd) return run_train(train);
    if (*sim_cmd) return run_simulate(sim);
    if (*exact_cmd) return run_exact(exact);
    return run_verify(verify);
  } catch (const gbdp::CapExceeded& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kCapExceeded;
  } catch (const gbdp::io::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kUsage;
  } catch (const gbdp::io::CheckpointError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntime;
  }
}
