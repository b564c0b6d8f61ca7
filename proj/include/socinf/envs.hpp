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

#ifndef SOCINF_ENVS_HPP_
#define SOCINF_ENVS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "socinf/grid.hpp"

namespace socinf {

enum class EnvKind { kHarvest, kCleanup, kBoxTrapped };

std::string_view to_string(EnvKind kind);
EnvKind parse_env_kind(std::string_view text);

// Built-in ASCII maps: "harvest", "cleanup", "boxtrapped", "apples5".
// Returns an empty view for unknown names.
std::string_view builtin_layout(std::string_view name);

struct EnvConfig {
  EnvKind kind = EnvKind::kHarvest;
  // Rows of the layout alphabet separated by '\n': '.' empty, 'A' apple,
  // 'W' waste, '#' wall, '~' river, 'B' box wall, digits agent starts.
  std::string layout;
  int n_agents = 0;  // 0 takes every digit in the layout
  int episode_length = 1000;
  int view_size = 15;
  int beam_length = 5;
  bool random_orientation = true;
  // When false, Fire-Fine-Beam is a no-op: no cost and no fines.
  bool fining = true;

  // Harvest: respawn probability indexed by the number of apples within
  // L1 distance `harvest_radius`, clamped to the last entry.
  std::vector<double> harvest_respawn{0.0, 0.005, 0.02, 0.05, 0.05, 0.1};
  int harvest_radius = 2;

  // Cleanup: apple spawn probability falls linearly from the maximum at zero
  // waste to 0 at the threshold; at most one waste cell spawns per step.
  double cleanup_waste_threshold = 0.4;
  double cleanup_waste_spawn_prob = 0.5;
  double cleanup_apple_spawn_prob = 0.05;
  double cleanup_initial_waste = 0.3;

  int width() const;
  int height() const;
  int agent_count() const;
  int action_count() const;
  // Throws ConfigError.
  void validate() const;
};

// Desk-scale defaults for each environment kind.
EnvConfig default_env_config(EnvKind kind);

struct StepResult {
  std::vector<double> rewards;
  EventLog events;
  bool done = false;
};

GridState reset(const EnvConfig& config, std::uint64_t seed);

// Advances one step in place. `messages` (optional) become the state's
// last_messages for the next observation.
StepResult step(const EnvConfig& config, GridState& state, std::span<const int> joint_action,
                std::span<const int> messages = {});

// Spawn phases, exposed for direct testing. Each appends spawn events.
void harvest_respawn(const EnvConfig& config, GridState& state, EventLog& events);
double harvest_respawn_probability(const EnvConfig& config, int neighbors);
int apples_within_radius(const GridState& state, Position p, int radius);

void cleanup_dynamics(const EnvConfig& config, GridState& state, EventLog& events);
double cleanup_apple_spawn_probability(const EnvConfig& config, double waste_fraction);
double waste_fraction(const GridState& state);

// Open-box handling; runs before movement so a released agent can leave in
// the same step.
void box_trapped_step_hook(GridState& state, std::span<const int> joint_action, EventLog& events);
// Inexhaustible apples: every free apple cell refills once vacated.
void box_trapped_respawn(GridState& state, EventLog& events);
bool box_is_open(const GridState& state);

// Cells reachable from `from` through walkable cells, as a row-major mask.
std::vector<std::uint8_t> reachable_cells(const GridState& state, Position from);

}  // namespace socinf

#endif  // SOCINF_ENVS_HPP_
