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

#include "socinf/envs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <numeric>

#include "socinf/error.hpp"

namespace socinf {
namespace {

constexpr std::string_view kHarvestLayout =
    "##################\n"
    "#....A.....A.....#\n"
    "#...AAA...AAA..0.#\n"
    "#..AAAAA.AAAAA...#\n"
    "#...AAA...AAA..1.#\n"
    "#....A.....A.....#\n"
    "#.2..............#\n"
    "#....A.....A...3.#\n"
    "#...AAA...AAA....#\n"
    "#..AAAAA.AAAAA.4.#\n"
    "#...AAA...AAA....#\n"
    "##################";

constexpr std::string_view kCleanupLayout =
    "##################\n"
    "#~~~~..........AA#\n"
    "#~~~~.0......AAAA#\n"
    "#~~~~.........AAA#\n"
    "#~~~~..1......AAA#\n"
    "#~~~~........AAAA#\n"
    "#~~~~...2....AAAA#\n"
    "#~~~~.........AAA#\n"
    "#~~~~..3......AAA#\n"
    "#~~~~........AAAA#\n"
    "#~~~~.4........AA#\n"
    "##################";

constexpr std::string_view kBoxTrappedLayout =
    "##########\n"
    "#AAA.....#\n"
    "#AAA.....#\n"
    "#........#\n"
    "#.....AAA#\n"
    "#....BBB.#\n"
    "#....B1B0#\n"
    "#....BBB.#\n"
    "##########";

constexpr std::string_view kApples5Layout =
    "A.A.A\n"
    ".....\n"
    "A.0.A\n"
    ".....\n"
    "A.A.A";

struct ParsedLayout {
  int width = 0;
  int height = 0;
  std::string cells;  // row-major characters
};

ParsedLayout parse_layout(std::string_view text) {
  ParsedLayout out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view row = text.substr(start, end - start);
    if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
    if (!row.empty()) {
      if (out.width == 0) out.width = static_cast<int>(row.size());
      if (static_cast<int>(row.size()) != out.width) {
        throw ConfigError("layout rows must all have the same length");
      }
      for (char ch : row) {
        if (std::string_view(".AW#~B").find(ch) == std::string_view::npos &&
            !(ch >= '0' && ch <= '9')) {
          throw ConfigError(std::string("unknown layout character '") + ch + "'");
        }
      }
      out.cells.append(row);
      ++out.height;
    }
    start = end + 1;
  }
  if (out.width == 0 || out.height == 0) throw ConfigError("layout is empty");
  return out;
}

int digit_count(const ParsedLayout& layout) {
  return static_cast<int>(std::count_if(layout.cells.begin(), layout.cells.end(),
                                        [](char c) { return c >= '0' && c <= '9'; }));
}

bool adjacent_to_box(const GridState& state, Position p) {
  for (Orientation o : {Orientation::kNorth, Orientation::kEast, Orientation::kSouth,
                        Orientation::kWest}) {
    if (state.cell_or_wall(p + heading(o)) == CellKind::kBoxWall) return true;
  }
  return false;
}

int find_trapped_agent(const GridState& state) {
  int trapped = -1;
  for (const auto& a : state.agents) {
    const auto reach = reachable_cells(state, a.position);
    bool sees_apple_field = false;
    bool touches_box = false;
    for (int i = 0; i < static_cast<int>(reach.size()); ++i) {
      if (!reach[i]) continue;
      if (state.apple_field[i]) sees_apple_field = true;
      if (adjacent_to_box(state, state.position_of(i))) touches_box = true;
    }
    if (!sees_apple_field && touches_box) {
      if (trapped >= 0) throw ConfigError("box trapped layout encloses more than one agent");
      trapped = a.id;
    }
  }
  if (trapped < 0) throw ConfigError("box trapped layout must enclose one agent in box walls");
  return trapped;
}

}  // namespace

std::string_view to_string(EnvKind kind) {
  switch (kind) {
    case EnvKind::kHarvest: return "harvest";
    case EnvKind::kCleanup: return "cleanup";
    case EnvKind::kBoxTrapped: return "boxtrapped";
  }
  return "?";
}

EnvKind parse_env_kind(std::string_view text) {
  if (text == "harvest") return EnvKind::kHarvest;
  if (text == "cleanup") return EnvKind::kCleanup;
  if (text == "boxtrapped") return EnvKind::kBoxTrapped;
  throw ConfigError("unknown environment kind '" + std::string(text) + "'");
}

std::string_view builtin_layout(std::string_view name) {
  if (name == "harvest") return kHarvestLayout;
  if (name == "cleanup") return kCleanupLayout;
  if (name == "boxtrapped") return kBoxTrappedLayout;
  if (name == "apples5") return kApples5Layout;
  return {};
}

int EnvConfig::width() const { return parse_layout(layout).width; }
int EnvConfig::height() const { return parse_layout(layout).height; }

int EnvConfig::agent_count() const {
  return n_agents > 0 ? n_agents : digit_count(parse_layout(layout));
}

int EnvConfig::action_count() const {
  return kind == EnvKind::kHarvest ? actions::kNumBasic : actions::kNumBasic + 1;
}

void EnvConfig::validate() const {
  const ParsedLayout parsed = parse_layout(layout);
  const int digits = digit_count(parsed);
  const int agents = agent_count();
  if (agents < 1) throw ConfigError("environment needs at least one agent");
  if (kind == EnvKind::kBoxTrapped && agents < 2) {
    throw ConfigError("box trapped needs at least two agents");
  }
  if (agents > digits) throw ConfigError("layout has fewer agent start cells than n_agents");
  for (int id = 0; id < agents; ++id) {
    if (parsed.cells.find(static_cast<char>('0' + id)) == std::string::npos) {
      throw ConfigError("layout is missing start digit " + std::to_string(id));
    }
  }
  if (episode_length < 1) throw ConfigError("episode_length must be at least 1");
  if (view_size < 3 || view_size % 2 == 0) {
    throw ConfigError("view_size must be odd and at least 3");
  }
  if (parsed.width < view_size || parsed.height < view_size) {
    throw ConfigError("grid " + std::to_string(parsed.width) + "x" +
                      std::to_string(parsed.height) + " is smaller than the " +
                      std::to_string(view_size) + "x" + std::to_string(view_size) +
                      " observation window");
  }
  if (beam_length < 1) throw ConfigError("beam_length must be at least 1");
  if (harvest_respawn.empty() || harvest_respawn.front() != 0.0) {
    throw ConfigError("harvest respawn table must start at 0");
  }
  for (std::size_t i = 0; i < harvest_respawn.size(); ++i) {
    if (harvest_respawn[i] < 0.0 || harvest_respawn[i] > 1.0) {
      throw ConfigError("harvest respawn probabilities must lie in [0, 1]");
    }
    if (i > 0 && harvest_respawn[i] < harvest_respawn[i - 1]) {
      throw ConfigError("harvest respawn table must be nondecreasing");
    }
  }
  if (harvest_radius < 1) throw ConfigError("harvest_radius must be positive");
  if (!(cleanup_waste_threshold > 0.0 && cleanup_waste_threshold <= 1.0)) {
    throw ConfigError("cleanup waste threshold must lie in (0, 1]");
  }
  for (double p : {cleanup_waste_spawn_prob, cleanup_apple_spawn_prob, cleanup_initial_waste}) {
    if (p < 0.0 || p > 1.0) throw ConfigError("cleanup probabilities must lie in [0, 1]");
  }
}

EnvConfig default_env_config(EnvKind kind) {
  EnvConfig c;
  c.kind = kind;
  switch (kind) {
    case EnvKind::kHarvest:
      c.layout = std::string(kHarvestLayout);
      c.view_size = 11;
      break;
    case EnvKind::kCleanup:
      c.layout = std::string(kCleanupLayout);
      c.view_size = 11;
      break;
    case EnvKind::kBoxTrapped:
      c.layout = std::string(kBoxTrappedLayout);
      c.view_size = 7;
      c.random_orientation = false;
      c.fining = false;
      break;
  }
  return c;
}

GridState reset(const EnvConfig& config, std::uint64_t seed) {
  config.validate();
  const ParsedLayout parsed = parse_layout(config.layout);
  const int n = config.agent_count();
  GridState s;
  s.width = parsed.width;
  s.height = parsed.height;
  s.view_size = config.view_size;
  s.rng = Rng(seed);
  const std::size_t area = parsed.cells.size();
  s.cells.assign(area, CellKind::kEmpty);
  s.apple_field.assign(area, 0);
  s.river_field.assign(area, 0);
  std::vector<Position> starts(n);
  for (std::size_t i = 0; i < area; ++i) {
    const char ch = parsed.cells[i];
    switch (ch) {
      case 'A':
        s.cells[i] = CellKind::kApple;
        s.apple_field[i] = 1;
        break;
      case 'W':
      case '~':
        s.cells[i] = ch == 'W' ? CellKind::kWaste : CellKind::kRiver;
        s.river_field[i] = 1;
        break;
      case '#': s.cells[i] = CellKind::kWall; break;
      case 'B': s.cells[i] = CellKind::kBoxWall; break;
      default:
        if (ch >= '0' && ch <= '9' && ch - '0' < n) {
          starts[ch - '0'] = s.position_of(static_cast<int>(i));
        }
        break;
    }
  }
  for (int id = 0; id < n; ++id) {
    AgentPose pose{id, starts[id], Orientation::kNorth};
    if (config.random_orientation) {
      pose.orientation = static_cast<Orientation>(s.rng.uniform_int(4));
    }
    s.agents.push_back(pose);
  }
  if (config.kind == EnvKind::kCleanup) {
    std::vector<int> river;
    for (std::size_t i = 0; i < area; ++i) {
      if (s.river_field[i]) river.push_back(static_cast<int>(i));
    }
    const auto waste =
        static_cast<std::size_t>(std::llround(config.cleanup_initial_waste * river.size()));
    for (std::size_t k = 0; k < waste; ++k) {
      const std::size_t pick = k + s.rng.uniform_int(river.size() - k);
      std::swap(river[k], river[pick]);
      s.cells[river[k]] = CellKind::kWaste;
    }
  }
  if (config.kind == EnvKind::kBoxTrapped) s.trapped_agent = find_trapped_agent(s);
  s.last_actions.assign(n, kNone);
  return s;
}

StepResult step(const EnvConfig& config, GridState& state, std::span<const int> joint_action,
                std::span<const int> messages) {
  const int n = state.num_agents();
  SOCINF_REQUIRE(static_cast<int>(joint_action.size()) == n,
                 "joint action has " + std::to_string(joint_action.size()) +
                     " entries for " + std::to_string(n) + " agents");
  const int action_count = config.action_count();
  for (int a : joint_action) {
    SOCINF_REQUIRE(a >= 0 && a < action_count, "action code " + std::to_string(a) +
                                                   " outside [0, " +
                                                   std::to_string(action_count) + ")");
  }
  StepResult out;
  out.rewards.assign(n, 0.0);
  if (config.kind == EnvKind::kBoxTrapped) box_trapped_step_hook(state, joint_action, out.events);
  apply_movement(state, joint_action);
  consume_apples(state, out.rewards, out.events);
  std::vector<int> beam_actions(joint_action.begin(), joint_action.end());
  if (!config.fining) {
    std::replace(beam_actions.begin(), beam_actions.end(), actions::kFireFine, actions::kStay);
  }
  fire_beams(state, beam_actions, config.beam_length, config.kind == EnvKind::kCleanup,
             out.rewards, out.events);
  switch (config.kind) {
    case EnvKind::kHarvest: harvest_respawn(config, state, out.events); break;
    case EnvKind::kCleanup: cleanup_dynamics(config, state, out.events); break;
    case EnvKind::kBoxTrapped: box_trapped_respawn(state, out.events); break;
  }
  state.last_actions.assign(joint_action.begin(), joint_action.end());
  state.last_messages.assign(messages.begin(), messages.end());
  ++state.tick;
  out.done = state.tick >= config.episode_length;
  return out;
}

int apples_within_radius(const GridState& state, Position p, int radius) {
  int n = 0;
  for (int dr = -radius; dr <= radius; ++dr) {
    const int span = radius - std::abs(dr);
    for (int dc = -span; dc <= span; ++dc) {
      if (dr == 0 && dc == 0) continue;
      const Position q{p.row + dr, p.col + dc};
      if (state.in_bounds(q) && state.cell(q) == CellKind::kApple) ++n;
    }
  }
  return n;
}

double harvest_respawn_probability(const EnvConfig& config, int neighbors) {
  const int last = static_cast<int>(config.harvest_respawn.size()) - 1;
  return config.harvest_respawn[std::clamp(neighbors, 0, last)];
}

void harvest_respawn(const EnvConfig& config, GridState& state, EventLog& events) {
  // Probabilities use the apple layout from before this phase so spawns
  // within one step are simultaneous.
  std::vector<int> spawned;
  for (int i = 0; i < static_cast<int>(state.cells.size()); ++i) {
    if (!state.apple_field[i] || state.cells[i] != CellKind::kEmpty) continue;
    const Position p = state.position_of(i);
    if (state.agent_at(p) >= 0) continue;
    const double prob =
        harvest_respawn_probability(config, apples_within_radius(state, p, config.harvest_radius));
    if (prob > 0.0 && state.rng.uniform() < prob) spawned.push_back(i);
  }
  for (int i : spawned) {
    state.cells[i] = CellKind::kApple;
    events.push_back({EventKind::kAppleSpawned, -1, state.position_of(i)});
  }
}

double waste_fraction(const GridState& state) {
  int river = 0;
  int waste = 0;
  for (std::size_t i = 0; i < state.cells.size(); ++i) {
    if (!state.river_field[i]) continue;
    ++river;
    if (state.cells[i] == CellKind::kWaste) ++waste;
  }
  return river == 0 ? 0.0 : static_cast<double>(waste) / river;
}

double cleanup_apple_spawn_probability(const EnvConfig& config, double waste) {
  if (waste >= config.cleanup_waste_threshold) return 0.0;
  return config.cleanup_apple_spawn_prob * (1.0 - waste / config.cleanup_waste_threshold);
}

void cleanup_dynamics(const EnvConfig& config, GridState& state, EventLog& events) {
  const double waste = waste_fraction(state);
  const double apple_prob = cleanup_apple_spawn_probability(config, waste);
  if (apple_prob > 0.0) {
    for (int i = 0; i < static_cast<int>(state.cells.size()); ++i) {
      if (!state.apple_field[i] || state.cells[i] != CellKind::kEmpty) continue;
      const Position p = state.position_of(i);
      if (state.agent_at(p) >= 0) continue;
      if (state.rng.uniform() < apple_prob) {
        state.cells[i] = CellKind::kApple;
        events.push_back({EventKind::kAppleSpawned, -1, p});
      }
    }
  }
  if (waste < config.cleanup_waste_threshold && config.cleanup_waste_spawn_prob > 0.0 &&
      state.rng.uniform() < config.cleanup_waste_spawn_prob) {
    std::vector<int> clean;
    for (int i = 0; i < static_cast<int>(state.cells.size()); ++i) {
      if (state.river_field[i] && state.cells[i] == CellKind::kRiver) clean.push_back(i);
    }
    if (!clean.empty()) {
      const int i = clean[state.rng.uniform_int(clean.size())];
      state.cells[i] = CellKind::kWaste;
      events.push_back({EventKind::kWasteSpawned, -1, state.position_of(i)});
    }
  }
}

bool box_is_open(const GridState& state) { return state.count(CellKind::kBoxWall) == 0; }

void box_trapped_step_hook(GridState& state, std::span<const int> joint_action,
                           EventLog& events) {
  if (box_is_open(state)) return;
  for (const auto& a : state.agents) {
    if (a.id == state.trapped_agent || joint_action[a.id] != actions::kOpenBox) continue;
    if (!adjacent_to_box(state, a.position)) continue;
    std::replace(state.cells.begin(), state.cells.end(), CellKind::kBoxWall, CellKind::kEmpty);
    events.push_back({EventKind::kBoxOpened, a.id, a.position});
    return;
  }
}

void box_trapped_respawn(GridState& state, EventLog& events) {
  for (int i = 0; i < static_cast<int>(state.cells.size()); ++i) {
    if (!state.apple_field[i] || state.cells[i] != CellKind::kEmpty) continue;
    const Position p = state.position_of(i);
    if (state.agent_at(p) >= 0) continue;
    state.cells[i] = CellKind::kApple;
    events.push_back({EventKind::kAppleSpawned, -1, p});
  }
}

std::vector<std::uint8_t> reachable_cells(const GridState& state, Position from) {
  std::vector<std::uint8_t> seen(state.cells.size(), 0);
  std::deque<Position> frontier{from};
  seen[state.index(from)] = 1;
  while (!frontier.empty()) {
    const Position p = frontier.front();
    frontier.pop_front();
    for (Orientation o : {Orientation::kNorth, Orientation::kEast, Orientation::kSouth,
                          Orientation::kWest}) {
      const Position q = p + heading(o);
      if (!state.in_bounds(q) || seen[state.index(q)] || !is_walkable(state.cell(q))) continue;
      seen[state.index(q)] = 1;
      frontier.push_back(q);
    }
  }
  return seen;
}

}  // namespace socinf
