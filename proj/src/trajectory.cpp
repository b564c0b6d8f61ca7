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

#include "socinf/trajectory.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "socinf/error.hpp"

namespace socinf {

const char* const kTrajectoryHeader =
    "step,episode,agent,action,message,extrinsic,influence,value,visibility,influence_on";

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ConfigError("malformed number '" + std::string(text) + "'");
  }
  return v;
}

void write_trajectory_header(std::ostream& out) { out << kTrajectoryHeader << '\n'; }

void write_record(std::ostream& out, const TrajectoryRecord& r) {
  out << r.step << ',' << r.episode << ',' << r.agent << ',' << r.action << ',' << r.message
      << ',' << format_double(r.extrinsic) << ',' << format_double(r.influence) << ','
      << format_double(r.value) << ',' << r.visibility << ',';
  for (std::size_t i = 0; i < r.influence_on.size(); ++i) {
    if (i > 0) out << ';';
    out << format_double(r.influence_on[i]);
  }
  out << '\n';
}

namespace {

template <class T>
T parse_integer(std::string_view text) {
  T v{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ConfigError("malformed integer '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = line.find(sep, start);
    if (end == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, end - start));
    start = end + 1;
  }
}

}  // namespace

std::vector<TrajectoryRecord> read_trajectory(std::istream& in) {
  std::vector<TrajectoryRecord> out;
  std::string line;
  if (!std::getline(in, line)) return out;
  if (line != kTrajectoryHeader) throw ConfigError("trajectory log has an unexpected header");
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 10) {
      throw ConfigError("trajectory log line " + std::to_string(line_no) + " has " +
                        std::to_string(f.size()) + " fields");
    }
    TrajectoryRecord r;
    r.step = parse_integer<long long>(f[0]);
    r.episode = parse_integer<int>(f[1]);
    r.agent = parse_integer<int>(f[2]);
    if (r.agent < 0 || r.agent >= 64) {
      throw ConfigError("trajectory log line " + std::to_string(line_no) + " has a bad agent id");
    }
    r.action = parse_integer<int>(f[3]);
    r.message = parse_integer<int>(f[4]);
    r.extrinsic = parse_double(f[5]);
    r.influence = parse_double(f[6]);
    r.value = parse_double(f[7]);
    r.visibility = parse_integer<std::uint64_t>(f[8]);
    if (!f[9].empty()) {
      for (auto part : split(f[9], ';')) r.influence_on.push_back(parse_double(part));
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<TrajectoryRecord> read_trajectory_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trajectory log " + path);
  return read_trajectory(in);
}

}  // namespace socinf
