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

#ifndef SOCINF_CONFIG_HPP_
#define SOCINF_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "socinf/envs.hpp"
#include "socinf/influence.hpp"

namespace socinf {

struct ModelConfig {
  int conv_channels = 6;
  int fc_width = 32;
  int hidden = 32;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

struct TrainConfig {
  long long total_steps = 100000;  // environment steps
  int rollout_length = 40;         // steps per update segment
  double lr_init = 0.00107;
  double lr_end = 0.000042;
  double momentum = 0.0;
  double gamma = 0.99;
  double value_weight = 0.5;
  double entropy = 0.00176;
  double grad_clip = 40.0;
  int vocab_size = 0;  // communication symbols; 0 disables the channel
  double message_weight = 1.0;
  double message_entropy = 0.001;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

struct MoaConfig {
  double loss_weight = 1.0;
  bool visible_only = true;
  bool shared_encoder = true;

  friend bool operator==(const MoaConfig&, const MoaConfig&) = default;
};

struct LogConfig {
  long long window = 200;
  bool trajectory = true;
  bool per_pair = false;
  int ic_min_steps = 20;
  bool miller_madow = true;

  friend bool operator==(const LogConfig&, const LogConfig&) = default;
};

struct RunConfig {
  std::vector<std::uint64_t> seeds{1};
  std::string out = "runs";
  int workers = 1;
  bool deterministic = true;
  int eval_episodes = 100;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct ExperimentConfig {
  std::string layout_source;  // builtin map name or layout file path
  EnvConfig env;
  ModelConfig model;
  TrainConfig train;
  InfluenceConfig influence;
  MoaConfig moa;
  LogConfig log;
  RunConfig run;

  // Throws ConfigError.
  void validate() const;
};

// Desk-scale defaults for an environment kind and influence variant,
// seeded from the published hyperparameter tables.
ExperimentConfig preset(EnvKind kind, InfluenceVariant variant);

// Parses `key = value` lines ('#' starts a comment). env.kind and
// influence.variant select the preset; every other key overrides it.
// Relative layout paths resolve against `base_dir`. Unknown keys, duplicate
// keys and malformed values throw ConfigError.
ExperimentConfig parse_config(std::string_view text, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

// Canonical text form; parse_config(to_text(c)) reproduces c.
std::string to_text(const ExperimentConfig& config);

// Every key the parser accepts.
std::vector<std::string> config_keys();

}  // namespace socinf

#endif  // SOCINF_CONFIG_HPP_
