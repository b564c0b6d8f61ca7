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

#ifndef SOCINF_HARNESS_HPP_
#define SOCINF_HARNESS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "socinf/checkpoint.hpp"
#include "socinf/config.hpp"
#include "socinf/metrics.hpp"
#include "socinf/moa.hpp"
#include "socinf/policy.hpp"

namespace socinf {

// One agent's learnable state. Weights are never shared across agents.
struct AgentModel {
  PolicyParams policy;
  std::optional<MoaParams> moa;
};

PolicyShape policy_shape(const ExperimentConfig& config, int agent);
MoaShape moa_shape(const ExperimentConfig& config);

std::vector<AgentModel> initial_models(const ExperimentConfig& config, std::uint64_t seed);

// Named as agent<k>/policy/<tensor> and agent<k>/moa/<tensor>.
TensorList model_tensors(std::vector<AgentModel>& models);
Checkpoint checkpoint_of(std::vector<AgentModel>& models);
// Throws ConfigError when the checkpoint does not fit the configured model.
std::vector<AgentModel> models_from_checkpoint(const ExperimentConfig& config,
                                               const Checkpoint& checkpoint);

SummaryOptions summary_options(const ExperimentConfig& config);

struct TrainResult {
  std::uint64_t seed = 0;
  long long steps = 0;
  int episodes = 0;
  std::vector<WindowRow> metrics;
  std::vector<double> episode_returns;  // collective extrinsic return per finished episode
  std::vector<AgentModel> models;
};

// Trains one seed. With a nonempty `out_dir` writes trajectory.csv (when
// enabled), metrics.csv, checkpoint.bin and config.txt there. A numeric
// failure saves the last good checkpoint before the NumericError propagates.
TrainResult train(const ExperimentConfig& config, std::uint64_t seed,
                  const std::string& out_dir = "");

// Trains every configured seed into <run.out>/seed_<s>.
std::vector<TrainResult> run_experiment(const ExperimentConfig& config);

// Frozen-policy rollouts; exactly `episodes` summaries.
std::vector<EpisodeSummary> evaluate(const std::vector<AgentModel>& models,
                                     const ExperimentConfig& config, int episodes,
                                     std::uint64_t seed);
std::vector<EpisodeSummary> evaluate(const std::string& checkpoint_path,
                                     const ExperimentConfig& config, int episodes,
                                     std::uint64_t seed);

// Metrics recomputed from a run directory's trajectory log and config echo.
std::vector<WindowRow> metrics_from_log(const std::string& run_dir);

struct BoxSeedResult {
  std::uint64_t seed = 0;
  double influence_open_rate = 0.0;
  double baseline_open_rate = 0.0;
};

// Trains the configured influence agents and a beta = 0 baseline per seed on
// Box Trapped, then reports the fraction of evaluation episodes in which the
// box was opened.
std::vector<BoxSeedResult> box_trapped_study(const ExperimentConfig& config, int eval_episodes);

}  // namespace socinf

#endif  // SOCINF_HARNESS_HPP_
