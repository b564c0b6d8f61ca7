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


// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any
// selected criterion fails.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <set>
#include <string>
#include <vector>

#include "socinf/envs.hpp"
#include "socinf/error.hpp"
#include "socinf/harness.hpp"
#include "socinf/influence.hpp"
#include "socinf/metrics.hpp"
#include "socinf/moa.hpp"
#include "socinf/policy.hpp"
#include "socinf/rng.hpp"
#include "support/gradcheck.hpp"
#include "support/oracles.hpp"
#include "support/policy_fixtures.hpp"

namespace socinf {
namespace {

namespace fs = std::filesystem;
using testing::Table;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string num(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

std::vector<double> influence_samples(const Table& cond, const std::vector<double>& prior,
                                      Divergence d, int samples, Rng& rng) {
  InfluenceTarget t;
  t.agent = 1;
  for (const auto& row : cond) t.conditionals.push_back(to_vec(row));
  const Vec p = to_vec(prior);
  std::vector<double> out;
  out.reserve(samples);
  std::vector<InfluenceTarget> ts{t};
  for (int i = 0; i < samples; ++i) {
    const int a = sample(p, rng);
    if (d == Divergence::kPmi) ts[0].realized_action = sample(ts[0].conditionals[a], rng);
    out.push_back(counterfactual_influence(ts, p, a, d, 2).total);
  }
  return out;
}

Table random_conditionals(Rng& rng, int n, double sharpness) {
  Table cond;
  for (int a = 0; a < n; ++a) cond.push_back(testing::random_simplex(rng, n, sharpness));
  return cond;
}

Table copy_conditionals(int n) {
  Table cond(n, std::vector<double>(n, 0.0));
  for (int a = 0; a < n; ++a) cond[a][a] = 1.0;
  return cond;
}

Outcome mi_equivalence() {
  Outcome o;
  Rng rng(101);
  const int samples = 100000;
  int pairs = 0;
  for (int n : {2, 4, 8}) {
    for (int variant = 0; variant < 2; ++variant) {
      const auto prior = testing::random_simplex(rng, n);
      const Table cond = random_conditionals(rng, n, variant == 0 ? 1.0 : 2.5);
      const double mi = testing::exact_mutual_information(testing::joint_table(prior, cond));
      const MonteCarloEstimate e =
          mi_monte_carlo(influence_samples(cond, prior, Divergence::kKl, samples, rng));
      ++pairs;
      o.require(std::abs(e.mean - mi) <= 3.0 * e.standard_error + 1e-12,
                "|A|=" + std::to_string(n) + " mean " + num(e.mean) + " vs MI " + num(mi));
    }
    const std::vector<double> uniform(n, 1.0 / n);
    const MonteCarloEstimate copy =
        mi_monte_carlo(influence_samples(copy_conditionals(n), uniform, Divergence::kKl, samples, rng));
    ++pairs;
    o.require(std::abs(copy.mean - std::log(static_cast<double>(n))) <= 0.02,
              "copy |A|=" + std::to_string(n) + " gives " + num(copy.mean));
  }
  if (o.pass) o.detail = std::to_string(pairs) + " pairs within 3 SE, copy pairs within 0.02 of ln|A|";
  return o;
}

Outcome pmi_expectation() {
  Outcome o;
  Rng rng(202);
  int pairs = 0;
  for (int n : {2, 4, 8}) {
    const auto prior = testing::random_simplex(rng, n);
    const Table cond = random_conditionals(rng, n, 1.5);
    const double mi = testing::exact_mutual_information(testing::joint_table(prior, cond));
    const MonteCarloEstimate e =
        mi_monte_carlo(influence_samples(cond, prior, Divergence::kPmi, 100000, rng));
    ++pairs;
    o.require(std::abs(e.mean - mi) <= 3.0 * e.standard_error,
              "|A|=" + std::to_string(n) + " mean " + num(e.mean) + " vs MI " + num(mi) +
                  " (SE " + num(e.standard_error) + ")");
  }
  if (o.pass) o.detail = std::to_string(pairs) + " tables within 3 SE of the MI oracle";
  return o;
}

Outcome divergence_axioms() {
  Outcome o;
  Rng rng(303);
  const double eps = 1e-9;
  const double ln2 = std::log(2.0);
  int failures = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(7));
    const Vec p = to_vec(testing::random_simplex(rng, n, 2.0));
    const Vec q = to_vec(testing::random_simplex(rng, n, 2.0));
    const double kpq = kl(p, q);
    bool ok = kpq >= 0.0 && std::abs(kl(p, p)) <= eps;
    ok = ok && ((p - q).cwiseAbs().maxCoeff() < 1e-6 || kpq > 0.0);
    const double j = jsd(p, q);
    ok = ok && std::abs(j - jsd(q, p)) <= 1e-12 && j >= 0.0 && j <= ln2 + 1e-12;
    std::vector<Vec> conds;
    for (int a = 0; a < 3; ++a) conds.push_back(to_vec(testing::random_simplex(rng, n, 2.0)));
    const Vec m = marginal_policy(conds, to_vec(testing::random_simplex(rng, 3)));
    ok = ok && std::abs(m.sum() - 1.0) <= 1e-12 && m.minCoeff() >= 0.0;
    if (!ok) ++failures;
  }
  o.require(failures == 0, std::to_string(failures) + " fuzzed pairs violate an axiom");

  Vec one(2), half(2), other(2);
  one << 1.0, 0.0;
  half << 0.5, 0.5;
  other << 0.0, 1.0;
  o.require(std::abs(kl(one, half) - ln2) <= 1e-6, "KL([1,0]||[.5,.5]) = " + num(kl(one, half), 10));
  o.require(std::abs(jsd(one, other) - ln2) <= 1e-6, "JSD([1,0],[0,1]) = " + num(jsd(one, other), 10));
  o.require(std::abs(pmi(one, half, 0) - ln2) <= 1e-6, "pmi = " + num(pmi(one, half, 0), 10));
  if (o.pass) o.detail = "10000 fuzzed pairs clean; ln 2 hand cases exact";
  return o;
}

Outcome gradient_correctness() {
  Outcome o;
  double worst = 0.0;
  for (int vocab : {0, 3}) {
    const PolicyShape shape = testing::tiny_shape(vocab);
    Rng rng(404 + vocab);
    PolicyParams p = testing::random_params(shape, rng);
    const PolicySegment seg = testing::random_segment(shape, rng, 6);
    const SegmentTargets targets = compute_targets(p, seg, 0.9);
    LossWeights w;
    w.gamma = 0.9;
    w.value_weight = 0.7;
    w.entropy = 0.3;
    w.message_weight = 0.6;
    w.message_entropy = 0.2;
    PolicyParams grad = PolicyParams::zeros(shape);
    actor_critic_loss(p, seg, targets, w, &grad);
    const auto errs = testing::compare_gradients(p.tensors(), grad.tensors(), [&] {
      return actor_critic_loss(p, seg, targets, w, nullptr).total;
    });
    for (const auto& e : errs) {
      worst = std::max(worst, e.relative_error);
      o.require(e.relative_error < 1e-4, e.name + " rel err " + num(e.relative_error));
    }
  }
  if (o.pass) o.detail = "worst tensor relative error " + num(worst, 3);
  return o;
}

double ledger(const EventLog& events, int agent) {
  double total = 0.0;
  for (const Event& e : events) {
    if (e.agent == agent) total += event_payoff(e.kind);
  }
  return total;
}

bool occupancy_ok(const GridState& s) {
  std::set<std::pair<int, int>> seen;
  for (const auto& a : s.agents) {
    if (!s.in_bounds(a.position) || !is_walkable(s.cell(a.position))) return false;
    if (!seen.insert({a.position.row, a.position.col}).second) return false;
  }
  return true;
}

Outcome environment_ledger() {
  Outcome o;
  int saturated = 0;
  for (EnvKind kind : {EnvKind::kHarvest, EnvKind::kCleanup, EnvKind::kBoxTrapped}) {
    EnvConfig c = default_env_config(kind);
    c.fining = true;
    GridState s = reset(c, 505);
    Rng rng(17);
    int river = 0;
    for (auto f : s.river_field) river += f;
    int violations = 0;
    for (int t = 0; t < 10000; ++t) {
      std::vector<int> joint(s.num_agents());
      for (int& a : joint) a = static_cast<int>(rng.uniform_int(c.action_count()));
      const StepResult r = step(c, s, joint);
      bool ok = occupancy_ok(s);
      for (int k = 0; k < s.num_agents(); ++k) ok = ok && r.rewards[k] == ledger(r.events, k);
      for (const Event& e : r.events) {
        const double pay = event_payoff(e.kind);
        ok = ok && (pay == 0.0 || pay == 1.0 || pay == -1.0 || pay == -50.0);
      }
      if (kind == EnvKind::kCleanup) {
        int waste = s.count(CellKind::kWaste);
        for (const Event& e : r.events) waste -= e.kind == EventKind::kWasteSpawned;
        if (static_cast<double>(waste) / river >= c.cleanup_waste_threshold) {
          ++saturated;
          for (const Event& e : r.events) ok = ok && e.kind != EventKind::kAppleSpawned;
        }
      }
      if (kind == EnvKind::kHarvest) {
        // Spawns are simultaneous, so the pre-spawn neighbourhood is the final
        // one minus this step's spawns.
        std::set<std::pair<int, int>> fresh;
        for (const Event& e : r.events) {
          if (e.kind == EventKind::kAppleSpawned) fresh.insert({e.cell.row, e.cell.col});
        }
        for (const auto& [row, col] : fresh) {
          int before = apples_within_radius(s, {row, col}, c.harvest_radius);
          for (const auto& [r2, c2] : fresh) {
            const int d = std::abs(r2 - row) + std::abs(c2 - col);
            if (d > 0 && d <= c.harvest_radius) --before;
          }
          ok = ok && before > 0;
        }
      }
      if (!ok) ++violations;
      if (r.done) s = reset(c, static_cast<std::uint64_t>(t));
    }
    o.require(violations == 0,
              std::string(to_string(kind)) + ": " + std::to_string(violations) + " bad steps");
  }
  o.require(saturated > 0, "cleanup never reached waste saturation");

  // Respawn rate per neighbour bucket on a hand-built patch.
  EnvConfig c = default_env_config(EnvKind::kHarvest);
  const Position centre{3, 3};
  std::vector<Position> ring;
  for (int r = 1; r <= 5; ++r) {
    for (int col = 1; col <= 5; ++col) {
      const Position p{r, col};
      const int d = std::abs(r - centre.row) + std::abs(col - centre.col);
      if (d >= 1 && d <= c.harvest_radius) ring.push_back(p);
    }
  }
  double worst = 0.0;
  for (int k = 0; k < static_cast<int>(c.harvest_respawn.size()); ++k) {
    std::string layout;
    for (int r = 0; r < 7; ++r) {
      for (int col = 0; col < 7; ++col) layout += (r == 6 && col == 0) ? '0' : '.';
      if (r < 6) layout += '\n';
    }
    layout[centre.row * 8 + centre.col] = 'A';
    for (int i = 0; i < k; ++i) layout[ring[i].row * 8 + ring[i].col] = 'A';
    EnvConfig patch = c;
    patch.layout = layout;
    patch.view_size = 3;
    GridState base = reset(patch, 606 + k);
    base.set_cell(centre, CellKind::kEmpty);
    if (apples_within_radius(base, centre, c.harvest_radius) != k) {
      o.require(false, "patch for bucket " + std::to_string(k) + " is malformed");
      continue;
    }
    const int trials = 10000;
    int spawned = 0;
    GridState s = base;
    for (int t = 0; t < trials; ++t) {
      s.cells = base.cells;
      EventLog ev;
      harvest_respawn(patch, s, ev);
      spawned += s.cell(centre) == CellKind::kApple;
    }
    const double rate = static_cast<double>(spawned) / trials;
    const double want = harvest_respawn_probability(c, k);
    worst = std::max(worst, std::abs(rate - want));
    if (k == 0) o.require(spawned == 0, "bucket 0 spawned " + std::to_string(spawned));
    o.require(std::abs(rate - want) <= 0.01,
              "bucket " + std::to_string(k) + " rate " + num(rate) + " vs " + num(want));
  }
  if (o.pass) {
    o.detail = "3 x 10000 fuzzed steps clean; respawn rates within " + num(worst, 2) + " of table";
  }
  return o;
}

Outcome moa_learnability() {
  Outcome o;
  const int A = 4;
  Rng rng(707);
  const std::vector<double> prior = testing::random_simplex(rng, A, 0.5);
  const Table cond = random_conditionals(rng, A, 1.2);
  double cond_entropy = 0.0;
  for (int a = 0; a < A; ++a) {
    for (double p : cond[a]) cond_entropy -= prior[a] * (p > 0.0 ? p * std::log(p) : 0.0);
  }

  MoaShape shape;
  shape.view_size = 3;
  shape.n_agents = 2;
  shape.action_count = A;
  shape.conv_channels = 2;
  shape.fc_width = 4;
  shape.hidden = 16;
  shape.shared_encoder = false;
  MoaParams m = MoaParams::initialized(shape, rng);
  ViewConv unused;
  SgdOptimizer opt;

  Observation blank;
  blank.view_size = 3;
  blank.window.assign(9, CellKind::kEmpty);
  const Vec p0 = to_vec(prior);

  // Agent 0 draws from `prior`; agent 1's next action follows cond[a0].
  auto script = [&](int steps) {
    MoaSegment seg;
    seg.initial_state = RecurrentState::zeros(shape.hidden);
    int a1 = static_cast<int>(rng.uniform_int(A));
    for (int t = 0; t < steps; ++t) {
      const int a0 = sample(p0, rng);
      const int next = sample(to_vec(cond[a0]), rng);
      seg.observations.push_back(blank);
      seg.joint_actions.push_back({a0, a1});
      seg.targets.push_back({next});
      seg.visible.push_back({1});
      a1 = next;
    }
    return seg;
  };

  const int updates = 20000;
  for (int u = 0; u < updates; ++u) {
    const double lr = 0.3 * (1.0 - 0.99 * static_cast<double>(u) / updates);
    const std::vector<MoaSegment> batch{script(20), script(20)};
    moa_update(m, unused, batch, true, 1.0, lr, opt, 0.9);
  }

  const MoaSegment held = script(20000);
  RecurrentState state = held.initial_state;
  std::vector<Vec> mean_pred(A, Vec::Zero(A));
  std::vector<int> seen(A, 0);
  double ce = 0.0;
  for (int t = 0; t < held.size(); ++t) {
    const MoaOutput out = moa_forward(m, unused, held.observations[t], held.joint_actions[t], state);
    const int a0 = held.joint_actions[t][0];
    mean_pred[a0] += out.dists[0];
    ++seen[a0];
    ce -= std::log(std::max(out.dists[0][held.targets[t][0]], 1e-300));
    state = out.next_state;
  }
  ce /= held.size();
  double worst_tv = 0.0;
  for (int a = 0; a < A; ++a) {
    if (seen[a] == 0) continue;
    const Vec pred = mean_pred[a] / seen[a];
    worst_tv = std::max(worst_tv, 0.5 * (pred - to_vec(cond[a])).cwiseAbs().sum());
  }
  o.require(worst_tv <= 0.05, "worst total variation " + num(worst_tv));
  o.require(std::abs(ce - cond_entropy) <= 0.05,
            "held-out loss " + num(ce) + " vs conditional entropy " + num(cond_entropy));
  if (o.pass) {
    o.detail = "TV " + num(worst_tv, 3) + ", loss " + num(ce) + " vs H " + num(cond_entropy);
  }
  return o;
}

Outcome box_trapped(const std::string& config_path) {
  Outcome o;
  const ExperimentConfig cfg = load_config(config_path);
  o.require(cfg.env.agent_count() == 2, "box config must have two agents");
  o.require(cfg.train.total_steps <= 500000, "box config exceeds 5e5 steps");
  o.require(cfg.run.seeds.size() == 5, "box config must list five seeds");
  const auto results = box_trapped_study(cfg, 100);
  int opened = 0;
  int quiet = 0;
  std::string rates;
  for (const auto& r : results) {
    opened += r.influence_open_rate >= 0.5 ? 1 : 0;
    quiet += r.baseline_open_rate <= 0.1 ? 1 : 0;
    rates += " " + num(r.influence_open_rate, 2) + "/" + num(r.baseline_open_rate, 2);
  }
  const int majority = static_cast<int>(results.size()) / 2 + 1;
  o.require(opened >= 3, std::to_string(opened) + "/5 seeds open in >= 50% of episodes");
  o.require(quiet >= majority, std::to_string(quiet) + "/5 baselines open in <= 10%");
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("influence/baseline open rates:") + rates;
  return o;
}

std::vector<TrajectoryRecord> speaker_log(int steps, bool bijective, Rng& rng) {
  std::vector<TrajectoryRecord> log;
  for (int t = 0; t < steps; ++t) {
    TrajectoryRecord r;
    r.step = t;
    r.agent = 0;
    r.message = static_cast<int>(rng.uniform_int(4));
    r.action = bijective ? (r.message + 1) % 4 : static_cast<int>(rng.uniform_int(4));
    log.push_back(r);
  }
  return log;
}

Outcome metric_exactness() {
  Outcome o;
  const std::vector<double> g{1, 0, 0, 0, 0};
  const MetricValue gv = gini(g);
  o.require(!gv.no_data && std::abs(gv.value - 0.8) <= 1e-9, "gini " + num(gv.value, 12));

  Rng rng(808);
  const MetricValue sc1 = speaker_consistency(speaker_log(5000, true, rng), 4, 4);
  o.require(!sc1.no_data && std::abs(sc1.value - 1.0) <= 1e-9, "bijective SC " + num(sc1.value));
  const MetricValue sc0 = speaker_consistency(speaker_log(100000, false, rng), 4, 4);
  o.require(!sc0.no_data && sc0.value <= 0.05, "independent SC " + num(sc0.value));

  // Joint table laid out as consecutive (speaker t, listener t + 1) pairs.
  Table table(3, std::vector<double>(4, 0.0));
  for (auto& row : table) {
    for (double& v : row) v = static_cast<double>(1 + rng.uniform_int(7));
  }
  std::vector<TrajectoryRecord> log;
  int episode = 0;
  for (int x = 0; x < 3; ++x) {
    for (int y = 0; y < 4; ++y) {
      for (int c = 0; c < static_cast<int>(table[x][y]); ++c) {
        TrajectoryRecord s;
        s.episode = episode;
        s.step = 2LL * episode;
        s.agent = 0;
        s.action = 0;
        s.message = x;
        TrajectoryRecord l;
        l.episode = episode;
        l.step = 2LL * episode + 1;
        l.agent = 1;
        l.action = y;
        log.push_back(s);
        log.push_back(l);
        ++episode;
      }
    }
  }
  const double exact = testing::exact_mutual_information(table);
  const MetricValue ic = instantaneous_coordination(log, IcMode::kSymbolAction, IcFilter::kAll, 4, 3,
                                                    IcOptions{1, false});
  o.require(!ic.no_data && std::abs(ic.value - exact) <= 1e-6,
            "IC " + num(ic.value, 10) + " vs " + num(exact, 10));

  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> up{2, 4, 6, 8, 10};
  const std::vector<double> down{5, 4, 3, 2, 1};
  const std::vector<double> mixed{2, 1, 4, 3, 5};
  o.require(spearman(x, up).value == 1.0, "spearman +1 case");
  o.require(spearman(x, down).value == -1.0, "spearman -1 case");
  o.require(std::abs(spearman(x, mixed).value - 0.8) <= 1e-12,
            "spearman 0.8 case gives " + num(spearman(x, mixed).value, 12));
  if (o.pass) o.detail = "gini, SC, IC and Spearman hand cases exact";
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

ExperimentConfig two_agent_config(InfluenceVariant variant) {
  ExperimentConfig c = preset(EnvKind::kHarvest, variant);
  c.env.layout = "A.A.A.\n......\n.0..1.\n......\nA.A.A.\n......";
  c.env.view_size = 5;
  c.env.episode_length = 25;
  c.env.harvest_respawn = {0.0, 0.1};
  c.train.total_steps = 1000;
  c.train.rollout_length = 10;
  c.model = {2, 8, 8};
  c.log.window = 200;
  c.log.ic_min_steps = 1;
  if (variant == InfluenceVariant::kBasic) c.influence.influencers = {0};
  c.validate();
  return c;
}

Outcome determinism(const fs::path& scratch) {
  Outcome o;
  for (InfluenceVariant v : {InfluenceVariant::kBasic, InfluenceVariant::kComm, InfluenceVariant::kMoa}) {
    const ExperimentConfig c = two_agent_config(v);
    const std::string name(to_string(v));
    const fs::path a = scratch / (name + "_a");
    const fs::path b = scratch / (name + "_b");
    const TrainResult ra = train(c, 12, a.string());
    train(c, 12, b.string());
    o.require(slurp(a / "metrics.csv") == slurp(b / "metrics.csv"), name + " metrics differ");
    o.require(slurp(a / "trajectory.csv") == slurp(b / "trajectory.csv"), name + " logs differ");
    o.require(slurp(a / "checkpoint.bin") == slurp(b / "checkpoint.bin"), name + " checkpoints differ");
    o.require(metrics_from_log(a.string()) == ra.metrics, name + " recomputed metrics differ");
  }
  if (o.pass) o.detail = "basic, comm and MOA reruns byte-identical; log recomputation exact";
  return o;
}

Outcome learning_smoke(const std::string& apples_config, const fs::path& scratch) {
  Outcome o;
  ExperimentConfig cfg = load_config(apples_config);
  std::string gains;
  for (std::uint64_t seed : cfg.run.seeds) {
    const TrainResult r = train(cfg, seed);
    const auto& ret = r.episode_returns;
    const std::size_t q = ret.size() / 4;
    if (q == 0) {
      o.require(false, "seed " + std::to_string(seed) + " finished too few episodes");
      continue;
    }
    double first = 0.0;
    double last = 0.0;
    for (std::size_t i = 0; i < q; ++i) {
      first += ret[i];
      last += ret[ret.size() - q + i];
    }
    first /= q;
    last /= q;
    gains += " " + num(first, 3) + "->" + num(last, 3);
    o.require(last > first, "seed " + std::to_string(seed) + " did not improve");
  }
  o.require(cfg.run.seeds.size() >= 3, "apples config lists fewer than 3 seeds");

  ExperimentConfig comm = two_agent_config(InfluenceVariant::kComm);
  comm.influence.alpha = 0.0;
  const fs::path dir = scratch / "comm_alpha0";
  train(comm, 3, dir.string());
  std::ifstream in(dir / "trajectory.csv");
  int nonzero = 0;
  for (const auto& r : read_trajectory(in)) nonzero += r.influence != 0.0 ? 1 : 0;
  o.require(nonzero > 0, "comm run logged no influence");
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("quartile returns:") + gains +
              "; comm alpha=0 logged " + std::to_string(nonzero) + " nonzero c";
  return o;
}

}  // namespace
}  // namespace socinf

int main(int argc, char** argv) {
  using namespace socinf;
  CLI::App app{"socinf acceptance suite"};
  std::vector<int> only;
  std::string source_dir = SOCINF_SOURCE_DIR;
  app.add_option("--only", only, "Criterion numbers to run (default all)")->check(CLI::Range(1, 10));
  app.add_option("--source-dir", source_dir, "Repository root holding configs/");
  CLI11_PARSE(app, argc, argv);

  const fs::path scratch = fs::temp_directory_path() / "socinf_acceptance";
  fs::remove_all(scratch);
  fs::create_directories(scratch);
  const std::string configs = source_dir + "/configs/";

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"mi-equivalence", mi_equivalence},
      {"pmi-expectation", pmi_expectation},
      {"divergence-axioms", divergence_axioms},
      {"gradient-correctness", gradient_correctness},
      {"environment-ledger", environment_ledger},
      {"moa-learnability", moa_learnability},
      {"box-trapped", [&] { return box_trapped(configs + "boxtrapped_moa.cfg"); }},
      {"metric-exactness", metric_exactness},
      {"determinism-round-trip", [&] { return determinism(scratch); }},
      {"learning-smoke", [&] { return learning_smoke(configs + "apples5.cfg", scratch); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2d %-24s %s (%.1fs)\n", out.pass ? "PASS" : "FAIL", id,
                criteria[i].first.c_str(), out.detail.c_str(), secs);
    std::fflush(stdout);
    failed += out.pass ? 0 : 1;
  }
  fs::remove_all(scratch);
  return failed == 0 ? 0 : 1;
}
