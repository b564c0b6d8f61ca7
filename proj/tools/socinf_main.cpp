// Copyright 2026 The socinf Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// socinf command-line entry point.
//
//   socinf train <config>              train every configured seed
//   socinf eval <checkpoint> <config>  frozen-policy evaluation
//   socinf metrics <logdir>            recompute windowed metrics from logs
//   socinf boxdemo <config>            Box Trapped influence vs baseline study
//
// Exit codes: 0 success, 1 configuration error, 2 numeric failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "socinf/config.hpp"
#include "socinf/error.hpp"
#include "socinf/harness.hpp"
#include "socinf/metrics.hpp"
#include "socinf/trajectory.hpp"

namespace {

struct CommonFlags {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  bool deterministic = false;
  std::optional<int> workers;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--seed", f.seed, "Run this single seed instead of run.seeds");
  cmd->add_option("--out", f.out, "Output directory (overrides run.out)");
  cmd->add_flag("--deterministic", f.deterministic, "Single worker, bit-reproducible");
  cmd->add_option("--workers", f.workers, "Rollout workers (nondeterministic above 1)")
      ->check(CLI::PositiveNumber);
}

socinf::ExperimentConfig configure(const std::string& path, const CommonFlags& f) {
  socinf::ExperimentConfig c = socinf::load_config(path);
  if (f.seed) c.run.seeds = {*f.seed};
  if (f.out) c.run.out = *f.out;
  if (f.workers) {
    c.run.workers = *f.workers;
    c.run.deterministic = *f.workers == 1;
  }
  if (f.deterministic) {
    if (f.workers && *f.workers != 1) {
      throw socinf::ConfigError("--deterministic needs a single worker");
    }
    c.run.deterministic = true;
    c.run.workers = 1;
  }
  c.validate();
  return c;
}

std::string metric_text(const socinf::MetricValue& m) {
  return m.no_data ? "nan" : socinf::format_double(m.value);
}

int cmd_train(const std::string& config_path, const CommonFlags& flags) {
  const socinf::ExperimentConfig c = configure(config_path, flags);
  for (const auto& r : socinf::run_experiment(c)) {
    double last = 0.0;
    if (!r.episode_returns.empty()) last = r.episode_returns.back();
    std::cout << "seed " << r.seed << ": " << r.steps << " steps, " << r.episodes
              << " episodes, last episode return " << socinf::format_double(last) << ", output "
              << c.run.out << "/seed_" << r.seed << "\n";
  }
  return 0;
}

int cmd_eval(const std::string& checkpoint, const std::string& config_path,
             const CommonFlags& flags) {
  const socinf::ExperimentConfig c = configure(config_path, flags);
  const auto summaries =
      socinf::evaluate(checkpoint, c, c.run.eval_episodes, c.run.seeds.front());
  std::ostringstream table;
  table << "episode,collective_reward,gini,r_times_eq,box_opened,sc,ic_sym_act,ic_act_act,"
           "ic_sym_act_influential,rho\n";
  int opened = 0;
  double reward = 0.0;
  for (const auto& s : summaries) {
    table << s.episode << ',' << socinf::format_double(s.collective_reward) << ','
          << metric_text(s.gini) << ',' << socinf::format_double(s.equality_weighted) << ','
          << (s.box_opened ? 1 : 0) << ',' << metric_text(s.metrics.at("sc")) << ','
          << metric_text(s.metrics.at("ic_sym_act")) << ','
          << metric_text(s.metrics.at("ic_act_act")) << ','
          << metric_text(s.metrics.at("ic_sym_act_influential")) << ','
          << metric_text(s.metrics.at("rho")) << '\n';
    opened += s.box_opened ? 1 : 0;
    reward += s.collective_reward;
  }
  if (flags.out) {
    std::filesystem::create_directories(*flags.out);
    std::ofstream(*flags.out + "/eval.csv") << table.str();
  } else {
    std::cout << table.str();
  }
  if (!summaries.empty()) {
    std::cout << summaries.size() << " episodes, mean collective reward "
              << socinf::format_double(reward / summaries.size()) << ", box opened in "
              << opened << "\n";
  }
  return 0;
}

int cmd_metrics(const std::string& logdir, const std::optional<std::string>& out) {
  namespace fs = std::filesystem;
  std::vector<fs::path> runs;
  if (fs::exists(fs::path(logdir) / "trajectory.csv")) {
    runs.push_back(logdir);
  } else if (fs::is_directory(logdir)) {
    for (const auto& entry : fs::directory_iterator(logdir)) {
      if (fs::exists(entry.path() / "trajectory.csv")) runs.push_back(entry.path());
    }
    std::sort(runs.begin(), runs.end());
  }
  if (runs.empty()) throw socinf::ConfigError("no trajectory logs under " + logdir);
  for (const auto& run : runs) {
    const auto rows = socinf::metrics_from_log(run.string());
    std::ostringstream text;
    socinf::write_metrics(text, rows);
    if (out) {
      const fs::path dest = fs::path(*out) / run.filename();
      fs::create_directories(dest);
      std::ofstream(dest / "metrics.csv") << text.str();
    } else {
      std::cout << "# " << run.string() << "\n" << text.str();
    }
    std::ifstream emitted(run / "metrics.csv");
    if (emitted) {
      std::stringstream ss;
      ss << emitted.rdbuf();
      std::cerr << run.string() << ": "
                << (ss.str() == text.str() ? "matches" : "DIFFERS FROM") << " emitted metrics.csv\n";
    }
  }
  return 0;
}

int cmd_boxdemo(const std::string& config_path, const CommonFlags& flags) {
  const socinf::ExperimentConfig c = configure(config_path, flags);
  const auto results = socinf::box_trapped_study(c, c.run.eval_episodes);
  int passing = 0;
  std::cout << "seed,influence_open_rate,baseline_open_rate\n";
  for (const auto& r : results) {
    std::cout << r.seed << ',' << socinf::format_double(r.influence_open_rate) << ','
              << socinf::format_double(r.baseline_open_rate) << '\n';
    if (r.influence_open_rate >= 0.5) ++passing;
  }
  std::cout << passing << "/" << results.size()
            << " seeds with the influence agent opening the box in at least half the episodes\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Social influence multi-agent gridworld toolkit"};
  app.require_subcommand(1);
  CommonFlags flags;
  std::string config_path, checkpoint, logdir;

  auto* train = app.add_subcommand("train", "Train agents from a config file");
  train->add_option("config", config_path, "Config file")->required();
  add_common(train, flags);

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint");
  eval->add_option("checkpoint", checkpoint, "Checkpoint file")->required();
  eval->add_option("config", config_path, "Config file")->required();
  add_common(eval, flags);

  auto* metrics = app.add_subcommand("metrics", "Recompute metrics from trajectory logs");
  metrics->add_option("logdir", logdir, "Run directory or directory of runs")->required();
  metrics->add_option("--out", flags.out, "Write metrics here instead of stdout");

  auto* boxdemo = app.add_subcommand("boxdemo", "Box Trapped influence study");
  boxdemo->add_option("config", config_path, "Config file")->required();
  add_common(boxdemo, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*train) return cmd_train(config_path, flags);
    if (*eval) return cmd_eval(checkpoint, config_path, flags);
    if (*metrics) return cmd_metrics(logdir, flags.out);
    if (*boxdemo) return cmd_boxdemo(config_path, flags);
  } catch (const socinf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const socinf::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
