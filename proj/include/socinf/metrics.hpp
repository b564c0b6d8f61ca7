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

#ifndef SOCINF_METRICS_HPP_
#define SOCINF_METRICS_HPP_

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "socinf/trajectory.hpp"

namespace socinf {

// A metric that may be undefined for the data at hand.
struct MetricValue {
  double value = 0.0;
  bool no_data = false;

  static MetricValue missing() { return {0.0, true}; }
};

// Sum |e_i - e_j| / (2 N sum e). All-zero input is 0 with the no-data flag.
MetricValue gini(std::span<const double> returns);

// Joint count (or probability) table, rows x, columns y.
using CountTable = std::vector<std::vector<double>>;

// Plug-in mutual information in nats, optionally with the Miller-Madow
// correction (which needs raw counts). Clamped at 0.
double mutual_information(const CountTable& table, bool miller_madow);

// Entropy of a count vector in nats.
double entropy_of_counts(std::span<const double> counts);

// Per speaker: mean over observed symbols of 1 - H(a|m)/ln A and over
// observed actions of 1 - H(m|a)/ln M, halved and summed; averaged over
// speakers with communication data.
MetricValue speaker_consistency(std::span<const TrajectoryRecord> records, int action_count,
                                int vocab_size);

enum class IcMode { kSymbolAction, kActionAction };
enum class IcFilter { kAll, kInfluentialMoments };

struct IcOptions {
  int min_steps = 20;
  bool miller_madow = true;
};

// Max over ordered pairs (k, j) of the empirical MI between k's symbol or
// action at one step and j's action at the next logged step of the same
// episode.
MetricValue instantaneous_coordination(std::span<const TrajectoryRecord> records, IcMode mode,
                                       IcFilter filter, int action_count, int vocab_size,
                                       const IcOptions& options = {});

// Spearman rank correlation with average ranks for ties.
MetricValue spearman(std::span<const double> x, std::span<const double> y);

// Spearman between influence received (from per-pair logs) and extrinsic
// return, over agents.
MetricValue influence_reward_correlation(std::span<const double> influence_received,
                                         std::span<const double> returns);

struct EpisodeSummary {
  int episode = 0;
  std::vector<double> returns;    // extrinsic, per agent
  std::vector<double> influence;  // influence credited, per agent
  double collective_reward = 0.0;
  MetricValue gini;
  double equality_weighted = 0.0;  // R (1 - G)
  bool box_opened = false;
  std::map<std::string, MetricValue> metrics;
};

struct SummaryOptions {
  int n_agents = 0;
  int action_count = 0;
  int vocab_size = 0;
  IcOptions ic;
};

// Summary of an arbitrary slice of records (one episode or one window).
EpisodeSummary summarize_records(std::span<const TrajectoryRecord> records,
                                 const SummaryOptions& options);

struct WindowRow {
  long long step = 0;  // end of the window
  double collective_reward = 0.0;
  MetricValue gini;
  double r_times_eq = 0.0;
  MetricValue sc;
  MetricValue ic_sym_act;
  MetricValue ic_act_act;
  MetricValue ic_sym_act_influential;
  MetricValue rho;

  friend bool operator==(const WindowRow& a, const WindowRow& b);
};

// Windows [w W, (w + 1) W) over the global step counter.
std::vector<WindowRow> summarize(std::span<const TrajectoryRecord> records, long long window,
                                 const SummaryOptions& options);

extern const char* const kMetricsHeader;
void write_metrics(std::ostream& out, std::span<const WindowRow> rows);

}  // namespace socinf

#endif  // SOCINF_METRICS_HPP_
