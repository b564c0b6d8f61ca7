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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "socinf/error.hpp"
#include "socinf/rng.hpp"
#include "support/oracles.hpp"

namespace socinf {
namespace {

// Sorted-order form: sum_i (2i - n - 1) x_(i) / (n sum x), i from 1.
double sorted_gini(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double num = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) num += (2.0 * (i + 1) - n - 1.0) * x[i];
  return num / (n * std::accumulate(x.begin(), x.end(), 0.0));
}

TEST(Gini, HandCases) {
  const std::vector<double> one_winner{1, 0, 0, 0, 0};
  EXPECT_NEAR(gini(one_winner).value, 0.8, 1e-9);
  const std::vector<double> pair{3, 1};
  EXPECT_NEAR(gini(pair).value, 0.25, 1e-12);
  const std::vector<double> equal{2, 2, 2};
  EXPECT_NEAR(gini(equal).value, 0.0, 1e-12);
}

TEST(Gini, AllZeroIsFlaggedNoData) {
  const std::vector<double> zeros{0, 0, 0};
  const MetricValue g = gini(zeros);
  EXPECT_TRUE(g.no_data);
  EXPECT_EQ(g.value, 0.0);
}

TEST(Gini, RejectsNegativeReturns) {
  const std::vector<double> bad{1, -1};
  EXPECT_THROW(gini(bad), ContractError);
}

TEST(Gini, MatchesSortedFormAndIsInvariant) {
  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(9));
    std::vector<double> x(n);
    for (double& v : x) v = rng.uniform() < 0.3 ? 0.0 : rng.uniform() * 10.0;
    x[0] += 0.1;
    const double g = gini(x).value;
    EXPECT_NEAR(g, sorted_gini(x), 1e-12);
    EXPECT_GE(g, 0.0);
    EXPECT_LE(g, 1.0 - 1.0 / n + 1e-12);
    std::vector<double> scaled(x);
    for (double& v : scaled) v *= 3.7;
    EXPECT_NEAR(gini(scaled).value, g, 1e-12);
    std::vector<double> shuffled(x);
    rng.shuffle(std::span<double>(shuffled));
    EXPECT_NEAR(gini(shuffled).value, g, 1e-12);
  }
}

TEST(MutualInformation, PlugInMatchesDirectSum) {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const int nx = 2 + static_cast<int>(rng.uniform_int(5));
    const int ny = 2 + static_cast<int>(rng.uniform_int(5));
    CountTable t(nx, std::vector<double>(ny));
    for (auto& row : t) {
      for (double& c : row) c = static_cast<double>(rng.uniform_int(6));
    }
    t[0][0] += 1.0;
    EXPECT_NEAR(mutual_information(t, false), testing::exact_mutual_information(t), 1e-12);
  }
}

TEST(MutualInformation, MillerMadowAddsSupportCorrection) {
  const CountTable t{{10, 0}, {0, 10}};
  // Supports: x 2, y 2, xy 2 -> (1 + 1 - 1) / (2 * 20).
  EXPECT_NEAR(mutual_information(t, true), std::log(2.0) + 1.0 / 40.0, 1e-12);
  EXPECT_NEAR(mutual_information(t, false), std::log(2.0), 1e-12);
}

TEST(MutualInformation, IndependentIsZero) {
  const CountTable t{{2, 4, 6}, {1, 2, 3}};
  EXPECT_NEAR(mutual_information(t, false), 0.0, 1e-12);
}

std::vector<TrajectoryRecord> speaker_log(Rng& rng, int steps, int actions, int vocab,
                                          bool bijective) {
  std::vector<TrajectoryRecord> out;
  for (int t = 0; t < steps; ++t) {
    TrajectoryRecord r;
    r.step = t;
    r.message = static_cast<int>(rng.uniform_int(vocab));
    r.action = bijective ? r.message : static_cast<int>(rng.uniform_int(actions));
    out.push_back(r);
  }
  return out;
}

TEST(SpeakerConsistency, BijectionIsOne) {
  Rng rng(1);
  const auto log = speaker_log(rng, 5000, 6, 6, true);
  const MetricValue sc = speaker_consistency(log, 6, 6);
  ASSERT_FALSE(sc.no_data);
  EXPECT_NEAR(sc.value, 1.0, 1e-12);
}

TEST(SpeakerConsistency, IndependentUniformIsNearZero) {
  Rng rng(2);
  const auto log = speaker_log(rng, 100000, 8, 5, false);
  const MetricValue sc = speaker_consistency(log, 8, 5);
  ASSERT_FALSE(sc.no_data);
  EXPECT_LE(sc.value, 0.05);
  EXPECT_GE(sc.value, 0.0);
}

TEST(SpeakerConsistency, HalfEntropyTableIsHalf) {
  // Symbol c yields actions c and c + 1 (mod 4) equally often, so every row
  // and column holds ln 2 = 0.5 ln 4 nats.
  std::vector<TrajectoryRecord> log;
  for (int c = 0; c < 4; ++c) {
    for (int shift = 0; shift < 2; ++shift) {
      for (int rep = 0; rep < 5; ++rep) {
        TrajectoryRecord r;
        r.message = c;
        r.action = (c + shift) % 4;
        log.push_back(r);
      }
    }
  }
  EXPECT_NEAR(speaker_consistency(log, 4, 4).value, 0.5, 1e-12);
}

TEST(SpeakerConsistency, SymbolRelabelingInvariant) {
  Rng rng(13);
  auto log = speaker_log(rng, 3000, 4, 4, false);
  for (auto& r : log) {
    if (rng.uniform() < 0.6) r.action = r.message;
  }
  const double before = speaker_consistency(log, 4, 4).value;
  for (auto& r : log) r.message = (r.message + 1) % 4;
  EXPECT_NEAR(speaker_consistency(log, 4, 4).value, before, 1e-12);
}

TEST(SpeakerConsistency, NoMessagesIsNoData) {
  Rng rng(3);
  auto log = speaker_log(rng, 50, 4, 4, false);
  for (auto& r : log) r.message = -1;
  EXPECT_TRUE(speaker_consistency(log, 4, 4).no_data);
  EXPECT_TRUE(speaker_consistency(log, 4, 0).no_data);
}

// Realizes every cell of the table exactly: one two-step episode per count,
// speaker 0 emits x at step 0 and listener 1 acts y at step 1.
std::vector<TrajectoryRecord> records_from_table(const CountTable& t, bool symbols) {
  std::vector<TrajectoryRecord> out;
  int episode = 0;
  for (std::size_t x = 0; x < t.size(); ++x) {
    for (std::size_t y = 0; y < t[x].size(); ++y) {
      for (int c = 0; c < static_cast<int>(t[x][y]); ++c) {
        TrajectoryRecord speaker;
        speaker.episode = episode;
        speaker.step = 0;
        speaker.agent = 0;
        speaker.action = symbols ? 0 : static_cast<int>(x);
        speaker.message = symbols ? static_cast<int>(x) : -1;
        TrajectoryRecord listener;
        listener.episode = episode;
        listener.step = 1;
        listener.agent = 1;
        listener.action = static_cast<int>(y);
        out.push_back(speaker);
        out.push_back(listener);
        ++episode;
      }
    }
  }
  return out;
}

TEST(InstantaneousCoordination, ExactJointTable) {
  Rng rng(21);
  const IcOptions plain{1, false};
  for (int trial = 0; trial < 20; ++trial) {
    CountTable t(4, std::vector<double>(5));
    for (auto& row : t) {
      for (double& c : row) c = static_cast<double>(rng.uniform_int(9));
    }
    t[1][2] += 3.0;
    const double exact = testing::exact_mutual_information(t);
    const auto sym = records_from_table(t, true);
    const MetricValue ic = instantaneous_coordination(sym, IcMode::kSymbolAction, IcFilter::kAll, 5, 4, plain);
    ASSERT_FALSE(ic.no_data);
    EXPECT_NEAR(ic.value, exact, 1e-6);
    const auto act = records_from_table(t, false);
    const MetricValue ic_act = instantaneous_coordination(act, IcMode::kActionAction, IcFilter::kAll, 5, 0, plain);
    ASSERT_FALSE(ic_act.no_data);
    EXPECT_NEAR(ic_act.value, exact, 1e-6);
  }
}

TEST(InstantaneousCoordination, CopiedSymbolApproachesLogVocab) {
  Rng rng(4);
  const int vocab = 4;
  std::vector<TrajectoryRecord> log;
  int previous = 0;
  for (int t = 0; t < 20000; ++t) {
    TrajectoryRecord speaker;
    speaker.step = t;
    speaker.agent = 0;
    speaker.action = 0;
    speaker.message = static_cast<int>(rng.uniform_int(vocab));
    TrajectoryRecord listener;
    listener.step = t;
    listener.agent = 1;
    listener.action = previous;
    listener.message = 0;
    previous = speaker.message;
    log.push_back(speaker);
    log.push_back(listener);
  }
  const MetricValue ic = instantaneous_coordination(log, IcMode::kSymbolAction, IcFilter::kAll, vocab, vocab);
  ASSERT_FALSE(ic.no_data);
  EXPECT_NEAR(ic.value, std::log(static_cast<double>(vocab)), 1e-3);
}

TEST(InstantaneousCoordination, PairsSuccessiveStepsOfAnEpisodeDespiteGaps) {
  // Global step counters jump when several workers interleave episodes.
  Rng rng(8);
  std::vector<TrajectoryRecord> dense;
  std::vector<TrajectoryRecord> gapped;
  int previous = 0;
  for (int t = 0; t < 3000; ++t) {
    TrajectoryRecord speaker;
    speaker.episode = t / 30;
    speaker.step = t;
    speaker.agent = 0;
    speaker.message = static_cast<int>(rng.uniform_int(3));
    TrajectoryRecord listener = speaker;
    listener.agent = 1;
    listener.message = 0;
    listener.action = t % 30 == 0 ? static_cast<int>(rng.uniform_int(3)) : previous;
    previous = speaker.message;
    dense.push_back(speaker);
    dense.push_back(listener);
    speaker.step = listener.step = 3LL * t + 1;
    gapped.push_back(speaker);
    gapped.push_back(listener);
  }
  const IcOptions plain{1, false};
  const auto a = instantaneous_coordination(dense, IcMode::kSymbolAction, IcFilter::kAll, 3, 3, plain);
  const auto b = instantaneous_coordination(gapped, IcMode::kSymbolAction, IcFilter::kAll, 3, 3, plain);
  ASSERT_FALSE(a.no_data);
  EXPECT_EQ(a.value, b.value);
  EXPECT_NEAR(a.value, std::log(3.0), 1e-2);
}

TEST(InstantaneousCoordination, InfluentialFilterKeepsAboveMeanMoments) {
  // Coordinated moments carry high influence; the rest are independent noise.
  Rng rng(6);
  std::vector<TrajectoryRecord> log;
  for (int e = 0; e < 4000; ++e) {
    const bool coordinated = e % 2 == 0;
    TrajectoryRecord speaker;
    speaker.episode = e;
    speaker.step = 0;
    speaker.agent = 0;
    speaker.action = 0;
    speaker.message = static_cast<int>(rng.uniform_int(3));
    speaker.influence = coordinated ? 1.0 : 0.0;
    TrajectoryRecord listener;
    listener.episode = e;
    listener.step = 1;
    listener.agent = 1;
    listener.action = coordinated ? speaker.message : static_cast<int>(rng.uniform_int(3));
    log.push_back(speaker);
    log.push_back(listener);
  }
  const auto all = instantaneous_coordination(log, IcMode::kSymbolAction, IcFilter::kAll, 3, 3);
  const auto moments =
      instantaneous_coordination(log, IcMode::kSymbolAction, IcFilter::kInfluentialMoments, 3, 3);
  EXPECT_NEAR(moments.value, std::log(3.0), 1e-2);
  EXPECT_LT(all.value, moments.value - 0.2);
}

TEST(InstantaneousCoordination, MaxOverPairsPicksCoordinatingPair) {
  // Agent 2 copies agent 1's previous action; agent 0 is independent.
  Rng rng(17);
  std::vector<TrajectoryRecord> log;
  int previous = 0;
  for (int t = 0; t < 30000; ++t) {
    const int a1 = static_cast<int>(rng.uniform_int(3));
    const int actions[3] = {static_cast<int>(rng.uniform_int(3)), a1, previous};
    previous = a1;
    for (int k = 0; k < 3; ++k) {
      TrajectoryRecord r;
      r.step = t;
      r.agent = k;
      r.action = actions[k];
      log.push_back(r);
    }
  }
  const IcOptions plain{20, false};
  const MetricValue ic = instantaneous_coordination(log, IcMode::kActionAction, IcFilter::kAll, 3, 0, plain);
  EXPECT_NEAR(ic.value, std::log(3.0), 1e-3);
  // Dropping the copier leaves only independent streams.
  std::vector<TrajectoryRecord> independent;
  for (const auto& r : log) {
    if (r.agent != 2) independent.push_back(r);
  }
  const MetricValue rest = instantaneous_coordination(independent, IcMode::kActionAction, IcFilter::kAll, 3, 0);
  EXPECT_LT(rest.value, 1e-3);
  EXPECT_GE(rest.value, 0.0);
}

TEST(InstantaneousCoordination, TooFewStepsIsNoData) {
  const CountTable t{{3, 1}, {1, 3}};
  const auto log = records_from_table(t, true);
  EXPECT_TRUE(instantaneous_coordination(log, IcMode::kSymbolAction, IcFilter::kAll, 2, 2).no_data);
}

TEST(Spearman, HandCases) {
  const std::vector<double> a{1, 2, 3, 4}, b{1, 3, 2, 4}, c{4, 3, 2, 1};
  EXPECT_NEAR(spearman(a, a).value, 1.0, 1e-12);
  EXPECT_NEAR(spearman(a, c).value, -1.0, 1e-12);
  EXPECT_NEAR(spearman(a, b).value, 0.8, 1e-12);
}

TEST(Spearman, MonotoneTransformAndTies) {
  const std::vector<double> x{0.1, 5, 2, 9, 3}, y{std::exp(0.1), std::exp(5.0), std::exp(2.0), std::exp(9.0), std::exp(3.0)};
  EXPECT_NEAR(spearman(x, y).value, 1.0, 1e-12);
  // Ranks with ties (1.5, 1.5, 3) against (1, 2, 3): Pearson of ranks.
  const std::vector<double> tied{1, 1, 2}, plain{1, 2, 3};
  EXPECT_NEAR(spearman(tied, plain).value, std::sqrt(3.0) / 2.0, 1e-12);
}

TEST(Spearman, DegenerateInputs) {
  const std::vector<double> flat{2, 2, 2}, x{1, 2, 3}, two{1, 2};
  EXPECT_TRUE(spearman(flat, x).no_data);
  EXPECT_THROW(spearman(two, two), ContractError);
  EXPECT_THROW(spearman(x, two), ContractError);
}

std::vector<TrajectoryRecord> random_log(Rng& rng, int agents, int steps, int episode_length) {
  std::vector<TrajectoryRecord> out;
  for (int t = 0; t < steps; ++t) {
    for (int k = 0; k < agents; ++k) {
      TrajectoryRecord r;
      r.step = t;
      r.episode = t / episode_length;
      r.agent = k;
      r.action = static_cast<int>(rng.uniform_int(4));
      r.message = static_cast<int>(rng.uniform_int(3));
      r.extrinsic = rng.uniform() < 0.1 ? 1.0 : 0.0;
      r.influence = rng.uniform();
      r.influence_on.assign(agents, 0.0);
      for (int j = 0; j < agents; ++j) {
        if (j != k) r.influence_on[j] = rng.uniform();
      }
      out.push_back(r);
    }
  }
  return out;
}

TEST(Summarize, WindowsPartitionTheLog) {
  Rng rng(9);
  const auto log = random_log(rng, 3, 1050, 100);
  SummaryOptions options{3, 4, 3, {}};
  const auto rows = summarize(log, 250, options);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows.front().step, 250);
  EXPECT_EQ(rows.back().step, 1050);
  double total = 0.0;
  for (const auto& r : log) total += r.extrinsic;
  double summed = 0.0;
  for (const auto& row : rows) summed += row.collective_reward;
  EXPECT_NEAR(summed, total, 1e-9);
  EXPECT_FALSE(rows.front().rho.no_data);
}

TEST(Summarize, EpisodeSummaryFields) {
  std::vector<TrajectoryRecord> log;
  const double rewards[3] = {4.0, 0.0, 0.0};
  for (int k = 0; k < 3; ++k) {
    TrajectoryRecord r;
    r.agent = k;
    r.extrinsic = rewards[k];
    r.influence = 0.5 * k;
    log.push_back(r);
  }
  const EpisodeSummary s = summarize_records(log, {3, 4, 0, {}});
  EXPECT_EQ(s.returns, std::vector<double>({4.0, 0.0, 0.0}));
  EXPECT_DOUBLE_EQ(s.collective_reward, 4.0);
  EXPECT_NEAR(s.gini.value, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(s.equality_weighted, 4.0 / 3.0, 1e-12);
  EXPECT_TRUE(s.metrics.at("sc").no_data);
  EXPECT_TRUE(s.metrics.at("rho").no_data);
}

TEST(Summarize, WriteIsDeterministic) {
  Rng a(12), b(12);
  SummaryOptions options{3, 4, 3, {}};
  std::ostringstream x, y;
  write_metrics(x, summarize(random_log(a, 3, 600, 200), 200, options));
  write_metrics(y, summarize(random_log(b, 3, 600, 200), 200, options));
  EXPECT_EQ(x.str(), y.str());
  EXPECT_EQ(x.str().substr(0, x.str().find('\n')), kMetricsHeader);
}

}  // namespace
}  // namespace socinf
