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

#ifndef SOCINF_GRID_HPP_
#define SOCINF_GRID_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "socinf/rng.hpp"

namespace socinf {

enum class CellKind : std::uint8_t {
  kEmpty = 0,
  kApple,
  kWaste,
  kWall,
  kRiver,
  kBoxWall,
};
inline constexpr int kNumCellKinds = 6;

enum class Orientation : std::uint8_t { kNorth = 0, kEast, kSouth, kWest };

Orientation rotate_clockwise(Orientation o);
Orientation rotate_counterclockwise(Orientation o);

struct Position {
  int row = 0;
  int col = 0;

  friend bool operator==(const Position&, const Position&) = default;
  friend Position operator+(Position a, Position b) {
    return {a.row + b.row, a.col + b.col};
  }
  friend Position operator-(Position a, Position b) {
    return {a.row - b.row, a.col - b.col};
  }
  friend Position operator*(int k, Position a) { return {k * a.row, k * a.col}; }
};

// Unit step in map coordinates for a facing direction.
Position heading(Orientation o);

// Action codes. Movement is egocentric: kMoveUp steps in the facing
// direction, kMoveLeft/kMoveRight strafe. Code 8 is environment specific
// (clean beam in Cleanup, open box in Box Trapped) and absent in Harvest.
using ActionCode = int;
namespace actions {
inline constexpr ActionCode kStay = 0;
inline constexpr ActionCode kMoveUp = 1;
inline constexpr ActionCode kMoveDown = 2;
inline constexpr ActionCode kMoveLeft = 3;
inline constexpr ActionCode kMoveRight = 4;
inline constexpr ActionCode kRotateCW = 5;
inline constexpr ActionCode kRotateCCW = 6;
inline constexpr ActionCode kFireFine = 7;
inline constexpr ActionCode kFireClean = 8;
inline constexpr ActionCode kOpenBox = 8;
inline constexpr int kNumBasic = 8;
}  // namespace actions

// Sentinel for "no action/message yet" at episode start.
inline constexpr int kNone = -1;

struct AgentPose {
  int id = 0;
  Position position;
  Orientation orientation = Orientation::kNorth;

  friend bool operator==(const AgentPose&, const AgentPose&) = default;
};

enum class EventKind : std::uint8_t {
  kAppleEaten,
  kBeamFired,
  kAgentFined,
  kWasteCleaned,
  kAppleSpawned,
  kWasteSpawned,
  kBoxOpened,
};

struct Event {
  EventKind kind;
  int agent = -1;
  Position cell{-1, -1};

  friend bool operator==(const Event&, const Event&) = default;
};

using EventLog = std::vector<Event>;

// Reward paid to the event's agent: +1 apple, -1 firing the fining beam, -50
// being fined. Everything else is free.
double event_payoff(EventKind kind);
const char* event_name(EventKind kind);

struct GridState {
  int width = 0;
  int height = 0;
  int view_size = 15;
  std::vector<CellKind> cells;           // row-major, height x width
  std::vector<std::uint8_t> apple_field; // cells where apples may spawn
  std::vector<std::uint8_t> river_field; // cells that hold river or waste
  std::vector<AgentPose> agents;
  std::vector<int> last_actions;   // joint action of the previous step
  std::vector<int> last_messages;  // empty when communication is off
  std::int64_t tick = 0;
  int trapped_agent = -1;  // Box Trapped only
  Rng rng;

  int num_agents() const { return static_cast<int>(agents.size()); }
  bool in_bounds(Position p) const {
    return p.row >= 0 && p.row < height && p.col >= 0 && p.col < width;
  }
  int index(Position p) const { return p.row * width + p.col; }
  Position position_of(int idx) const { return {idx / width, idx % width}; }
  CellKind cell(Position p) const { return cells[index(p)]; }
  void set_cell(Position p, CellKind k) { cells[index(p)] = k; }
  // Out-of-bounds reads as Wall.
  CellKind cell_or_wall(Position p) const {
    return in_bounds(p) ? cell(p) : CellKind::kWall;
  }
  int agent_at(Position p) const;
  int count(CellKind kind) const;

  friend bool operator==(const GridState&, const GridState&) = default;
};

bool is_walkable(CellKind kind);
// Walls and box walls stop beams and movement.
bool is_solid(CellKind kind);

struct VisibleAgent {
  int id = 0;
  int row = 0;  // window coordinates
  int col = 0;

  friend bool operator==(const VisibleAgent&, const VisibleAgent&) = default;
};

// Egocentric V x V view. The observer sits at (V-1, V/2) facing row 0.
struct Observation {
  int view_size = 0;
  std::vector<CellKind> window;
  std::vector<VisibleAgent> visible_agents;  // excludes the observer
  std::vector<int> prev_actions;
  std::vector<int> prev_messages;
  // Same-step actions of influencers, filled in only for influencees of the
  // centralized variant.
  std::vector<int> influencer_actions;

  CellKind at(int row, int col) const { return window[row * view_size + col]; }
  int anchor_row() const { return view_size - 1; }
  int anchor_col() const { return view_size / 2; }

  friend bool operator==(const Observation&, const Observation&) = default;
};

// Map position seen at window cell (row, col) by an agent with the given pose.
Position window_to_map(const AgentPose& pose, int view_size, int row, int col);

Observation observe(const GridState& state, int agent_id);

bool is_visible(const GridState& state, int observer, int target);

// Cells a beam passes through: up to `length` cells straight ahead, stopping
// before the first solid or out-of-bounds cell.
std::vector<Position> beam_cells(const GridState& state, int agent_id, int length);

// Resolves rotations and movement for one step. Movers are processed in a
// random order drawn from the state's generator; a move into an occupied or
// solid cell fails and the agent stays put.
void apply_movement(GridState& state, std::span<const int> joint_action);

// Agents standing on apples eat them.
void consume_apples(GridState& state, std::span<double> rewards, EventLog& events);

// Fining beams (all agents) and clean beams (when `clean_beam` is true).
void fire_beams(GridState& state, std::span<const int> joint_action, int beam_length,
                bool clean_beam, std::span<double> rewards, EventLog& events);

// ASCII rendering with the layout alphabet; agents drawn as their index digit.
std::string render(const GridState& state);

}  // namespace socinf

#endif  // SOCINF_GRID_HPP_
