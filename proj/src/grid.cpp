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

#include "socinf/grid.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "socinf/error.hpp"

namespace socinf {

Orientation rotate_clockwise(Orientation o) {
  return static_cast<Orientation>((static_cast<int>(o) + 1) % 4);
}

Orientation rotate_counterclockwise(Orientation o) {
  return static_cast<Orientation>((static_cast<int>(o) + 3) % 4);
}

Position heading(Orientation o) {
  switch (o) {
    case Orientation::kNorth: return {-1, 0};
    case Orientation::kEast: return {0, 1};
    case Orientation::kSouth: return {1, 0};
    case Orientation::kWest: return {0, -1};
  }
  return {0, 0};
}

double event_payoff(EventKind kind) {
  switch (kind) {
    case EventKind::kAppleEaten: return 1.0;
    case EventKind::kBeamFired: return -1.0;
    case EventKind::kAgentFined: return -50.0;
    default: return 0.0;
  }
}

const char* event_name(EventKind kind) {
  switch (kind) {
    case EventKind::kAppleEaten: return "AppleEaten";
    case EventKind::kBeamFired: return "BeamFired";
    case EventKind::kAgentFined: return "AgentFined";
    case EventKind::kWasteCleaned: return "WasteCleaned";
    case EventKind::kAppleSpawned: return "AppleSpawned";
    case EventKind::kWasteSpawned: return "WasteSpawned";
    case EventKind::kBoxOpened: return "BoxOpened";
  }
  return "?";
}

int GridState::agent_at(Position p) const {
  for (const auto& a : agents) {
    if (a.position == p) return a.id;
  }
  return -1;
}

int GridState::count(CellKind kind) const {
  return static_cast<int>(std::count(cells.begin(), cells.end(), kind));
}

bool is_walkable(CellKind kind) {
  return kind == CellKind::kEmpty || kind == CellKind::kApple ||
         kind == CellKind::kWaste || kind == CellKind::kRiver;
}

bool is_solid(CellKind kind) {
  return kind == CellKind::kWall || kind == CellKind::kBoxWall;
}

Position window_to_map(const AgentPose& pose, int view_size, int row, int col) {
  const int ahead = view_size - 1 - row;
  const int right = col - view_size / 2;
  const Position forward = heading(pose.orientation);
  const Position side = heading(rotate_clockwise(pose.orientation));
  return pose.position + ahead * forward + right * side;
}

Observation observe(const GridState& state, int agent_id) {
  SOCINF_REQUIRE(agent_id >= 0 && agent_id < state.num_agents(), "agent id out of range");
  const int v = state.view_size;
  const AgentPose& pose = state.agents[agent_id];
  Observation obs;
  obs.view_size = v;
  obs.window.resize(static_cast<std::size_t>(v) * v);
  for (int r = 0; r < v; ++r) {
    for (int c = 0; c < v; ++c) {
      const Position p = window_to_map(pose, v, r, c);
      obs.window[r * v + c] = state.cell_or_wall(p);
      const int other = state.in_bounds(p) ? state.agent_at(p) : -1;
      if (other >= 0 && other != agent_id) obs.visible_agents.push_back({other, r, c});
    }
  }
  std::sort(obs.visible_agents.begin(), obs.visible_agents.end(),
            [](const VisibleAgent& a, const VisibleAgent& b) { return a.id < b.id; });
  obs.prev_actions = state.last_actions;
  obs.prev_messages = state.last_messages;
  return obs;
}

bool is_visible(const GridState& state, int observer, int target) {
  SOCINF_REQUIRE(observer >= 0 && observer < state.num_agents(), "observer out of range");
  SOCINF_REQUIRE(target >= 0 && target < state.num_agents(), "target out of range");
  const AgentPose& pose = state.agents[observer];
  const Position d = state.agents[target].position - pose.position;
  const Position f = heading(pose.orientation);
  const Position s = heading(rotate_clockwise(pose.orientation));
  const int ahead = d.row * f.row + d.col * f.col;
  const int right = d.row * s.row + d.col * s.col;
  const int v = state.view_size;
  return ahead >= 0 && ahead <= v - 1 && std::abs(right) <= v / 2;
}

std::vector<Position> beam_cells(const GridState& state, int agent_id, int length) {
  const AgentPose& pose = state.agents[agent_id];
  const Position step = heading(pose.orientation);
  std::vector<Position> out;
  Position p = pose.position;
  for (int i = 0; i < length; ++i) {
    p = p + step;
    if (!state.in_bounds(p) || is_solid(state.cell(p))) break;
    out.push_back(p);
  }
  return out;
}

namespace {

Position move_offset(const AgentPose& pose, int action) {
  const Position f = heading(pose.orientation);
  const Position s = heading(rotate_clockwise(pose.orientation));
  switch (action) {
    case actions::kMoveUp: return f;
    case actions::kMoveDown: return -1 * f;
    case actions::kMoveLeft: return -1 * s;
    case actions::kMoveRight: return s;
    default: return {0, 0};
  }
}

bool is_move(int action) {
  return action >= actions::kMoveUp && action <= actions::kMoveRight;
}

}  // namespace

void apply_movement(GridState& state, std::span<const int> joint_action) {
  for (auto& a : state.agents) {
    const int act = joint_action[a.id];
    if (act == actions::kRotateCW) a.orientation = rotate_clockwise(a.orientation);
    if (act == actions::kRotateCCW) a.orientation = rotate_counterclockwise(a.orientation);
  }
  std::vector<int> order(state.agents.size());
  std::iota(order.begin(), order.end(), 0);
  state.rng.shuffle(std::span<int>(order));
  for (int id : order) {
    AgentPose& a = state.agents[id];
    if (!is_move(joint_action[id])) continue;
    const Position target = a.position + move_offset(a, joint_action[id]);
    if (!state.in_bounds(target) || !is_walkable(state.cell(target))) continue;
    if (state.agent_at(target) >= 0) continue;
    a.position = target;
  }
}

void consume_apples(GridState& state, std::span<double> rewards, EventLog& events) {
  for (const auto& a : state.agents) {
    if (state.cell(a.position) != CellKind::kApple) continue;
    state.set_cell(a.position, CellKind::kEmpty);
    rewards[a.id] += event_payoff(EventKind::kAppleEaten);
    events.push_back({EventKind::kAppleEaten, a.id, a.position});
  }
}

void fire_beams(GridState& state, std::span<const int> joint_action, int beam_length,
                bool clean_beam, std::span<double> rewards, EventLog& events) {
  for (const auto& a : state.agents) {
    const int act = joint_action[a.id];
    if (act == actions::kFireFine) {
      rewards[a.id] += event_payoff(EventKind::kBeamFired);
      events.push_back({EventKind::kBeamFired, a.id, a.position});
      for (Position p : beam_cells(state, a.id, beam_length)) {
        const int hit = state.agent_at(p);
        if (hit < 0) continue;
        rewards[hit] += event_payoff(EventKind::kAgentFined);
        events.push_back({EventKind::kAgentFined, hit, p});
      }
    } else if (clean_beam && act == actions::kFireClean) {
      for (Position p : beam_cells(state, a.id, beam_length)) {
        if (state.cell(p) != CellKind::kWaste) continue;
        state.set_cell(p, CellKind::kRiver);
        events.push_back({EventKind::kWasteCleaned, a.id, p});
      }
    }
  }
}

std::string render(const GridState& state) {
  std::string out;
  for (int r = 0; r < state.height; ++r) {
    for (int c = 0; c < state.width; ++c) {
      const int agent = state.agent_at({r, c});
      if (agent >= 0) {
        out.push_back(static_cast<char>('0' + agent % 10));
        continue;
      }
      switch (state.cell({r, c})) {
        case CellKind::kEmpty: out.push_back('.'); break;
        case CellKind::kApple: out.push_back('A'); break;
        case CellKind::kWaste: out.push_back('W'); break;
        case CellKind::kWall: out.push_back('#'); break;
        case CellKind::kRiver: out.push_back('~'); break;
        case CellKind::kBoxWall: out.push_back('B'); break;
      }
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace socinf
