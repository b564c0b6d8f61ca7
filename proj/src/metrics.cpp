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

#include "socinf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <map>
#include <numeric>
#include <ostream>

#include "socinf/error.hpp"

namespace socinf {

MetricValue gini(std::span<const double> returns) {
  double total = 0.0;
  for (double e : returns) {
    SOCINF_REQUIRE(e >= 0.0, "gini needs nonnegative returns");
    total += e;
  }
  if (returns.empty() || total <= 0.0) return {0.0, true};
  double diff = 0.0;
  for (double a : returns) {
    for (double b : returns) diff += std::abs(a - b);
  }
  return {diff / (2.0 * static_cast<double>(returns.size()) * total), false};
}

double entropy_of_counts(std::span<const double> counts) {
  double total = 0.0;
  for (double c : counts) total += c;
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) h -= (c / total) * std::log(c / total);
  }
  return h;
}

double mutual_information(const CountTable& table, bool miller_madow) {
  SOCINF_REQUIRE(!table.empty() && !table.front().empty(), "empty table");
  const std::size_t nx = table.size();
  const std::size_t ny = table.front().size();
  std::vector<double> px(nx, 0.0), py(ny, 0.0), pxy;
  pxy.reserve(nx * ny);
  for (std::size_t x = 0; x < nx; ++x) {
    SOCINF_REQUIRE(table[x].size() == ny, "ragged table");
    for (std::size_t y = 0; y < ny; ++y) {
      SOCINF_REQUIRE(table[x][y] >= 0.0, "negative count");
      px[x] += table[x][y];
      py[y] += table[x][y];
      pxy.push_back(table[x][y]);
    }
  }
  double mi = entropy_of_counts(px) + entropy_of_counts(py) - entropy_of_counts(pxy);
  if (miller_madow) {
    const double n = std::accumulate(px.begin(), px.end(), 0.0);
    auto support = [](const std::vector<double>& v) {
      return static_cast<double>(std::count_if(v.begin(), v.end(), [](double c) { return c > 0.0; }));
    };
    if (n > 0.0) {
      mi += ((support(px) - 1.0) + (support(py) - 1.0) - (support(pxy) - 1.0)) / (2.0 * n);
    }
  }
  return std::max(0.0, mi);
}

namespace {

int agent_count(std::span<const TrajectoryRecord> records) {
  int n = 0;
  for (const auto& r : records) n = std::max(n, r.agent + 1);
  return n;
}

double consistency_term(const CountTable& rows, int outcomes) {
  // Mean over rows with data of 1 - H(row) / ln(outcomes).
  const double hmax = std::log(static_cast<double>(outcomes));
  double sum = 0.0;
  int used = 0;
  for (const auto& row : rows) {
    if (std::accumulate(row.begin(), row.end(), 0.0) <= 0.0) continue;
    sum += 1.0 - entropy_of_counts(row) / hmax;
    ++used;
  }
  return used == 0 ? 0.0 : sum / used;
}

}  // namespace

MetricValue speaker_consistency(std::span<const TrajectoryRecord> records, int action_count,
                                int vocab_size) {
  if (vocab_size < 2 || action_count < 2) return MetricValue::missing();
  const int n = agent_count(records);
  double sum = 0.0;
  int speakers = 0;
  for (int k = 0; k < n; ++k) {
    CountTable by_symbol(vocab_size, std::vector<double>(action_count, 0.0));
    CountTable by_action(action_count, std::vector<double>(vocab_size, 0.0));
    bool any = false;
    for (const auto& r : records) {
      if (r.agent != k || r.message < 0 || r.action < 0) continue;
      SOCINF_REQUIRE(r.message < vocab_size && r.action < action_count, "record out of range");
      by_symbol[r.message][r.action] += 1.0;
      by_action[r.action][r.message] += 1.0;
      any = true;
    }
    if (!any) continue;
    sum += 0.5 * (consistency_term(by_symbol, action_count) + consistency_term(by_action, vocab_size));
    ++speakers;
  }
  if (speakers == 0) return MetricValue::missing();
  return {std::clamp(sum / speakers, 0.0, 1.0), false};
}

MetricValue instantaneous_coordination(std::span<const TrajectoryRecord> records, IcMode mode,
                                       IcFilter filter, int action_count, int vocab_size,
                                       const IcOptions& options) {
  const bool symbols = mode == IcMode::kSymbolAction;
  if (symbols && vocab_size < 1) return MetricValue::missing();
  const int n = agent_count(records);
  if (n < 2) return MetricValue::missing();
  // (episode, step) -> per-agent record.
  std::map<std::pair<int, long long>, std::vector<const TrajectoryRecord*>> at;
  std::vector<double> influence_sum(n, 0.0);
  std::vector<int> influence_count(n, 0);
  for (const auto& r : records) {
    auto& slot = at[{r.episode, r.step}];
    if (slot.empty()) slot.assign(n, nullptr);
    slot[r.agent] = &r;
    influence_sum[r.agent] += r.influence;
    ++influence_count[r.agent];
  }
  const int x_size = symbols ? vocab_size : action_count;
  MetricValue best = MetricValue::missing();
  for (int k = 0; k < n; ++k) {
    const double mean_influence =
        influence_count[k] > 0 ? influence_sum[k] / influence_count[k] : 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == k) continue;
      CountTable table(x_size, std::vector<double>(action_count, 0.0));
      int used = 0;
      for (auto it = at.begin(); it != at.end(); ++it) {
        const TrajectoryRecord* rk = it->second[k];
        if (rk == nullptr) continue;
        // Successor within the episode; async logs interleave global steps.
        const auto next = std::next(it);
        if (next == at.end() || next->first.first != it->first.first) continue;
        if (next->second[j] == nullptr) continue;
        const int x = symbols ? rk->message : rk->action;
        const int y = next->second[j]->action;
        if (x < 0 || y < 0) continue;
        if (filter == IcFilter::kInfluentialMoments && rk->influence < mean_influence) continue;
        SOCINF_REQUIRE(x < x_size && y < action_count, "record out of range");
        table[x][y] += 1.0;
        ++used;
      }
      if (used < options.min_steps) continue;
      const double mi = mutual_information(table, options.miller_madow);
      if (best.no_data || mi > best.value) best = {mi, false};
    }
  }
  return best;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

MetricValue spearman(std::span<const double> x, std::span<const double> y) {
  SOCINF_REQUIRE(x.size() == y.size(), "spearman inputs differ in length");
  SOCINF_REQUIRE(x.size() >= 3, "spearman needs at least three points");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return MetricValue::missing();
  return {std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0), false};
}

MetricValue influence_reward_correlation(std::span<const double> influence_received,
                                         std::span<const double> returns) {
  return spearman(influence_received, returns);
}

EpisodeSummary summarize_records(std::span<const TrajectoryRecord> records,
                                 const SummaryOptions& options) {
  const int n = std::max(options.n_agents, agent_count(records));
  EpisodeSummary s;
  if (!records.empty()) s.episode = records.front().episode;
  s.returns.assign(n, 0.0);
  s.influence.assign(n, 0.0);
  std::vector<double> received(n, 0.0);
  bool pairs_logged = false;
  for (const auto& r : records) {
    s.returns[r.agent] += r.extrinsic;
    s.influence[r.agent] += r.influence;
    if (!r.influence_on.empty()) {
      pairs_logged = true;
      for (int j = 0; j < n && j < static_cast<int>(r.influence_on.size()); ++j) {
        received[j] += r.influence_on[j];
      }
    }
  }
  s.collective_reward = std::accumulate(s.returns.begin(), s.returns.end(), 0.0);
  std::vector<double> clamped(s.returns);
  for (double& e : clamped) e = std::max(0.0, e);
  s.gini = gini(clamped);
  s.equality_weighted = s.collective_reward * (1.0 - (s.gini.no_data ? 0.0 : s.gini.value));
  s.metrics["sc"] = speaker_consistency(records, options.action_count, options.vocab_size);
  s.metrics["ic_sym_act"] = instantaneous_coordination(records, IcMode::kSymbolAction, IcFilter::kAll,
                                                       options.action_count, options.vocab_size,
                                                       options.ic);
  s.metrics["ic_act_act"] = instantaneous_coordination(records, IcMode::kActionAction, IcFilter::kAll,
                                                       options.action_count, options.vocab_size,
                                                       options.ic);
  s.metrics["ic_sym_act_influential"] = instantaneous_coordination(
      records, IcMode::kSymbolAction, IcFilter::kInfluentialMoments, options.action_count,
      options.vocab_size, options.ic);
  s.metrics["rho"] = pairs_logged && n >= 3 ? influence_reward_correlation(received, s.returns)
                                            : MetricValue::missing();
  return s;
}

namespace {

bool same(const MetricValue& a, const MetricValue& b) {
  return a.no_data == b.no_data && (a.no_data || a.value == b.value);
}

}  // namespace

bool operator==(const WindowRow& a, const WindowRow& b) {
  return a.step == b.step && a.collective_reward == b.collective_reward && same(a.gini, b.gini) &&
         a.r_times_eq == b.r_times_eq && same(a.sc, b.sc) && same(a.ic_sym_act, b.ic_sym_act) &&
         same(a.ic_act_act, b.ic_act_act) &&
         same(a.ic_sym_act_influential, b.ic_sym_act_influential) && same(a.rho, b.rho);
}

std::vector<WindowRow> summarize(std::span<const TrajectoryRecord> records, long long window,
                                 const SummaryOptions& options) {
  SOCINF_REQUIRE(window >= 1, "window must be at least one step");
  std::map<long long, std::vector<TrajectoryRecord>> buckets;
  long long last_step = -1;
  for (const auto& r : records) {
    buckets[r.step / window].push_back(r);
    last_step = std::max(last_step, r.step);
  }
  std::vector<WindowRow> rows;
  for (const auto& [w, recs] : buckets) {
    const EpisodeSummary s = summarize_records(recs, options);
    WindowRow row;
    row.step = std::min((w + 1) * window, last_step + 1);
    row.collective_reward = s.collective_reward;
    row.gini = s.gini;
    row.r_times_eq = s.equality_weighted;
    row.sc = s.metrics.at("sc");
    row.ic_sym_act = s.metrics.at("ic_sym_act");
    row.ic_act_act = s.metrics.at("ic_act_act");
    row.ic_sym_act_influential = s.metrics.at("ic_sym_act_influential");
    row.rho = s.metrics.at("rho");
    rows.push_back(row);
  }
  return rows;
}

const char* const kMetricsHeader =
    "step,collective_reward,gini,r_times_eq,sc,ic_sym_act,ic_act_act,ic_sym_act_influential,rho";

void write_metrics(std::ostream& out, std::span<const WindowRow> rows) {
  auto cell = [](const MetricValue& m) { return m.no_data ? std::string("nan") : format_double(m.value); };
  out << kMetricsHeader << '\n';
  for (const auto& r : rows) {
    out << r.step << ',' << format_double(r.collective_reward) << ',' << cell(r.gini) << ','
        << format_double(r.r_times_eq) << ',' << cell(r.sc) << ',' << cell(r.ic_sym_act) << ','
        << cell(r.ic_act_act) << ',' << cell(r.ic_sym_act_influential) << ',' << cell(r.rho)
        << '\n';
  }
}

}  // namespace socinf
