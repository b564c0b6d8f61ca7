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

#ifndef SOCINF_TRAJECTORY_HPP_
#define SOCINF_TRAJECTORY_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace socinf {

// One agent at one environment step.
struct TrajectoryRecord {
  long long step = 0;  // global environment step
  int episode = 0;
  int agent = 0;
  int action = -1;
  int message = -1;  // -1 without communication
  double extrinsic = 0.0;
  double influence = 0.0;  // influence reward credited to this record
  double value = 0.0;
  std::uint64_t visibility = 0;  // bit j set when agent j is in view
  std::vector<double> influence_on;  // per-agent contributions; empty unless logged

  friend bool operator==(const TrajectoryRecord&, const TrajectoryRecord&) = default;
};

// Shortest decimal text that reads back to the same double; "nan" for NaN.
std::string format_double(double v);
double parse_double(std::string_view text);

extern const char* const kTrajectoryHeader;

void write_trajectory_header(std::ostream& out);
void write_record(std::ostream& out, const TrajectoryRecord& r);

// Parses a log written by write_record. Throws ConfigError on malformed rows.
std::vector<TrajectoryRecord> read_trajectory(std::istream& in);
std::vector<TrajectoryRecord> read_trajectory_file(const std::string& path);

}  // namespace socinf

#endif  // SOCINF_TRAJECTORY_HPP_
