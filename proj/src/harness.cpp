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

#include "socinf/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "socinf/envs.hpp"
#include "socinf/error.hpp"
#include "socinf/influence.hpp"
#include "socinf/trajectory.hpp"

namespace socinf {

PolicyShape policy_shape(const ExperimentConfig& config, int agent) {
  PolicyShape s;
  s.view_size = config.env.view_size;
  s.n_agents = config.env.agent_count();
  s.action_count = config.env.action_count();
  s.vocab_size = config.train.vocab_size;
  s.conv_channels = config.model.conv_channels;
  s.fc_width = config.model.fc_width;
  s.hidden = config.model.hidden;
  const InfluenceConfig& inf = config.influence;
  if (inf.variant == InfluenceVariant::kBasic && !inf.is_influencer(agent)) {
    s.influencer_slots = static_cast<int>(inf.influencers.size());
  }
  return s;
}

MoaShape moa_shape(const ExperimentConfig& config) {
  MoaShape s;
  s.view_size = config.env.view_size;
  s.n_agents = config.env.agent_count();
  s.action_count = config.env.action_count();
  s.conv_channels = config.model.conv_channels;
  s.fc_width = config.model.fc_width;
  s.hidden = config.model.hidden;
  s.shared_encoder = config.moa.shared_encoder;
  return s;
}

std::vector<AgentModel> initial_models(const ExperimentConfig& config, std::uint64_t seed) {
  const int n = config.env.agent_count();
  std::vector<AgentModel> models;
  for (int k = 0; k < n; ++k) {
    Rng rng(derive_seed(derive_seed(seed, 3), static_cast<std::uint64_t>(k)));
    AgentModel m{PolicyParams::initialized(policy_shape(config, k), rng), std::nullopt};
    if (config.influence.variant == InfluenceVariant::kMoa) {
      m.moa = MoaParams::initialized(moa_shape(config), rng);
    }
    models.push_back(std::move(m));
  }
  return models;
}

namespace {

TensorList agent_tensors(const AgentModel& m, const std::string& prefix) {
  TensorList out = m.policy.tensors(prefix + "policy/");
  if (m.moa) {
    TensorList moa = m.moa->tensors(prefix + "moa/");
    out.insert(out.end(), moa.begin(), moa.end());
  }
  return out;
}

}  // namespace

TensorList model_tensors(std::vector<AgentModel>& models) {
  TensorList out;
  for (std::size_t k = 0; k < models.size(); ++k) {
    TensorList t = agent_tensors(models[k], "agent" + std::to_string(k) + "/");
    out.insert(out.end(), t.begin(), t.end());
  }
  return out;
}

Checkpoint checkpoint_of(std::vector<AgentModel>& models) { return snapshot(model_tensors(models)); }

std::vector<AgentModel> models_from_checkpoint(const ExperimentConfig& config,
                                               const Checkpoint& checkpoint) {
  std::vector<AgentModel> models;
  const int n = config.env.agent_count();
  for (int k = 0; k < n; ++k) {
    AgentModel m{PolicyParams::zeros(policy_shape(config, k)), std::nullopt};
    if (config.influence.variant == InfluenceVariant::kMoa) m.moa = MoaParams::zeros(moa_shape(config));
    models.push_back(std::move(m));
  }
  restore(checkpoint, model_tensors(models));
  return models;
}

SummaryOptions summary_options(const ExperimentConfig& config) {
  SummaryOptions o;
  o.n_agents = config.env.agent_count();
  o.action_count = config.env.action_count();
  o.vocab_size = config.train.vocab_size;
  o.ic.min_steps = config.log.ic_min_steps;
  o.ic.miller_madow = config.log.miller_madow;
  return o;
}

namespace {

// Everything decided at one step before the environment moves.
struct Decision {
  std::vector<Observation> obs;
  std::vector<Vec> inputs;
  std::vector<RecurrentState> state;  // policy state entering the step
  std::vector<PolicyOutput> out;
  std::vector<int> actions;
  std::vector<int> messages;  // empty without communication
  std::vector<RecurrentState> moa_next;
  std::vector<double> influence;  // basic and MOA variants
  std::vector<std::vector<double>> influence_on;
  std::vector<std::vector<std::uint8_t>> visible;
  std::vector<std::uint64_t> visibility;
  // Communication: influence of the previous step's messages on this
  // step's actions, credited back to the speakers' previous step.
  std::vector<double> comm_credit;
  std::vector<std::vector<double>> comm_on;
};

void require_finite_output(const PolicyOutput& out) {
  require_finite(out.action_dist, "action distribution");
  if (!std::isfinite(out.value)) throw NumericError("non-finite value estimate");
  require_finite(out.next_state.hidden, "recurrent state");
  if (out.message_dist) require_finite(*out.message_dist, "message distribution");
  if (out.message_value && !std::isfinite(*out.message_value)) {
    throw NumericError("non-finite message value estimate");
  }
}

Vec prior_for(CounterfactualPrior prior, const Vec& policy) {
  return prior == CounterfactualPrior::kUniform ? uniform_prior(static_cast<int>(policy.size()))
                                                : policy;
}

Decision decide(const ExperimentConfig& cfg, const std::vector<AgentModel>& models,
                const GridState& env, const std::vector<RecurrentState>& states,
                const std::vector<RecurrentState>& moa_states, const Decision* prev, Rng& rng) {
  const int n = env.num_agents();
  const InfluenceConfig& inf = cfg.influence;
  const bool basic = inf.variant == InfluenceVariant::kBasic;
  const bool comm = inf.variant == InfluenceVariant::kComm;
  Decision d;
  d.obs.resize(n);
  d.inputs.resize(n);
  d.state = states;
  d.out.resize(n);
  d.actions.assign(n, kNone);
  if (comm) d.messages.assign(n, kNone);
  d.influence.assign(n, 0.0);
  d.influence_on.assign(n, std::vector<double>(n, 0.0));
  d.comm_credit.assign(n, 0.0);
  d.comm_on.assign(n, std::vector<double>(n, 0.0));

  std::vector<int> order;
  if (basic) order = inf.influencers;
  for (int k = 0; k < n; ++k) {
    if (!basic || !inf.is_influencer(k)) order.push_back(k);
  }
  for (int k : order) {
    Observation o = observe(env, k);
    if (basic && !inf.is_influencer(k)) {
      for (int i : inf.influencers) o.influencer_actions.push_back(d.actions[i]);
    }
    const PolicyParams& p = models[k].policy;
    d.inputs[k] = recurrent_input(p.shape, encode(p, o), o);
    d.out[k] = core_step(p, d.inputs[k], states[k]);
    require_finite_output(d.out[k]);
    d.actions[k] = sample(d.out[k].action_dist, rng);
    if (comm) d.messages[k] = sample(*d.out[k].message_dist, rng);
    d.obs[k] = std::move(o);
  }

  d.visible.assign(n, std::vector<std::uint8_t>(n, 0));
  d.visibility.assign(n, 0);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      if (j != k && is_visible(env, k, j)) {
        d.visible[k][j] = 1;
        d.visibility[k] |= std::uint64_t{1} << j;
      }
    }
  }

  if (basic) {
    std::vector<InfluenceeContext> influencees;
    for (int j = 0; j < n; ++j) {
      if (inf.is_influencer(j)) continue;
      influencees.push_back({j, &models[j].policy, d.inputs[j], states[j], d.actions[j]});
    }
    for (int s = 0; s < static_cast<int>(inf.influencers.size()); ++s) {
      const int k = inf.influencers[s];
      const InfluenceResult r =
          basic_influence(s, influencees, prior_for(inf.prior, d.out[k].action_dist), d.actions[k],
                          inf.divergence, n);
      d.influence[k] = r.total;
      d.influence_on[k] = r.per_agent;
    }
  }

  if (inf.variant == InfluenceVariant::kMoa) {
    d.moa_next.resize(n);
    for (int k = 0; k < n; ++k) {
      const MoaParams& m = *models[k].moa;
      const Vec input = moa_input(m.shape, moa_features(m, models[k].policy.conv, d.obs[k]), d.actions);
      const InfluenceResult r =
          moa_influence(k, m, input, moa_states[k], d.actions, d.visible[k], inf.visibility_gate,
                        prior_for(inf.prior, d.out[k].action_dist), inf.divergence);
      d.influence[k] = r.total;
      d.influence_on[k] = r.per_agent;
      d.moa_next[k] = moa_core(m, input, moa_states[k]).next_state;
      require_finite(d.moa_next[k].hidden, "model-of-others state");
    }
  }

  if (comm && prev != nullptr) {
    for (int k = 0; k < n; ++k) {
      std::vector<InfluenceeContext> listeners;
      for (int j = 0; j < n; ++j) {
        if (j != k) listeners.push_back({j, &models[j].policy, d.inputs[j], states[j], d.actions[j]});
      }
      const InfluenceResult r =
          comm_influence(k, listeners, prior_for(inf.prior, *prev->out[k].message_dist),
                         prev->messages[k], inf.divergence, n);
      d.comm_credit[k] = r.total;
      d.comm_on[k] = r.per_agent;
    }
  }
  return d;
}

// Experience since the last update, per agent.
struct AgentBuffer {
  PolicySegment policy;
  MoaSegment moa;
};

// One environment driven by a set of models.
class Worker {
 public:
  Worker(const ExperimentConfig& cfg, std::uint64_t env_seed, std::uint64_t action_seed,
         int episode_stride, int episode_offset)
      : cfg_(cfg),
        n_(cfg.env.agent_count()),
        rng_(action_seed),
        env_seed_(env_seed),
        stride_(episode_stride),
        offset_(episode_offset) {}

  bool in_episode() const { return in_episode_; }
  int episode_id() const { return episode_ * stride_ + offset_; }
  const Decision& current() const { return *current_; }
  const std::vector<RecurrentState>& states() const { return states_; }
  const std::vector<RecurrentState>& moa_states() const { return moa_states_; }

  void begin_episode(const std::vector<AgentModel>& models) {
    env_ = reset(cfg_.env, derive_seed(env_seed_, static_cast<std::uint64_t>(episode_)));
    states_.clear();
    moa_states_.clear();
    for (const auto& m : models) {
      states_.push_back(RecurrentState::zeros(m.policy.shape.hidden));
      if (m.moa) moa_states_.push_back(RecurrentState::zeros(m.moa->shape.hidden));
    }
    current_ = decide(cfg_, models, env_, states_, moa_states_, nullptr, rng_);
    in_episode_ = true;
  }

  // Advances the environment one step with the pending decision and makes
  // the next one. Appends one record per agent; fills `buffers` when given.
  // Returns the step's events.
  EventLog advance(const std::vector<AgentModel>& models, long long global_step, double beta_now,
                   std::vector<AgentBuffer>* buffers, std::vector<TrajectoryRecord>& records) {
    Decision& d = *current_;
    const InfluenceConfig& inf = cfg_.influence;
    const bool comm = inf.variant == InfluenceVariant::kComm;
    const bool moa = inf.variant == InfluenceVariant::kMoa;
    StepResult r = step(cfg_.env, env_, d.actions, d.messages);
    for (int k = 0; k < n_; ++k) {
      states_[k] = d.out[k].next_state;
      if (moa) moa_states_[k] = d.moa_next[k];
    }
    std::optional<Decision> next;
    if (!r.done) next = decide(cfg_, models, env_, states_, moa_states_, &d, rng_);

    for (int k = 0; k < n_; ++k) {
      const double e = r.rewards[k];
      const double c = comm ? (next ? next->comm_credit[k] : 0.0) : d.influence[k];
      double action_reward = e;
      double message_reward = 0.0;
      switch (inf.variant) {
        case InfluenceVariant::kNone: break;
        case InfluenceVariant::kComm: message_reward = inf.alpha * e + beta_now * c; break;
        case InfluenceVariant::kMoa: action_reward = inf.alpha * e + beta_now * c; break;
        case InfluenceVariant::kBasic:
          if (inf.is_influencer(k)) {
            action_reward = inf.alpha * e + beta_now * c;
          } else {
            action_reward = inf.alpha * e;
            if (inf.influencee_reward) {
              double received = 0.0;
              for (int i : inf.influencers) received += d.influence_on[i][k];
              action_reward += beta_now * received;
            }
          }
          break;
      }
      TrajectoryRecord rec;
      rec.step = global_step;
      rec.episode = episode_id();
      rec.agent = k;
      rec.action = d.actions[k];
      rec.message = comm ? d.messages[k] : -1;
      rec.extrinsic = e;
      rec.influence = c;
      rec.value = d.out[k].value;
      rec.visibility = d.visibility[k];
      if (cfg_.log.per_pair && inf.variant != InfluenceVariant::kNone) {
        rec.influence_on = comm ? (next ? next->comm_on[k] : std::vector<double>(n_, 0.0))
                                : d.influence_on[k];
      }
      records.push_back(std::move(rec));

      if (buffers == nullptr) continue;
      AgentBuffer& b = (*buffers)[k];
      b.policy.observations.push_back(d.obs[k]);
      b.policy.actions.push_back(d.actions[k]);
      b.policy.action_rewards.push_back(action_reward);
      if (comm) {
        b.policy.messages.push_back(d.messages[k]);
        b.policy.message_rewards.push_back(message_reward);
      }
      if (moa) {
        b.moa.observations.push_back(d.obs[k]);
        b.moa.joint_actions.push_back(d.actions);
        std::vector<int> targets;
        std::vector<std::uint8_t> visible;
        for (int j = 0; j < n_; ++j) {
          if (j == k) continue;
          targets.push_back(next ? next->actions[j] : kNone);
          visible.push_back(d.visible[k][j]);
        }
        b.moa.targets.push_back(std::move(targets));
        b.moa.visible.push_back(std::move(visible));
      }
    }
    if (next) {
      current_ = std::move(next);
    } else {
      current_.reset();
      in_episode_ = false;
      ++episode_;
    }
    return std::move(r.events);
  }

  // Starts fresh buffers whose segments begin at the current state.
  void open_buffers(std::vector<AgentBuffer>& buffers) const {
    buffers.assign(n_, AgentBuffer{});
    for (int k = 0; k < n_; ++k) {
      buffers[k].policy.initial_state = states_[k];
      if (!moa_states_.empty()) buffers[k].moa.initial_state = moa_states_[k];
    }
  }

  // Value bootstraps for the open segments: zero after a terminal step.
  void close_buffers(std::vector<AgentBuffer>& buffers) const {
    for (int k = 0; k < n_; ++k) {
      if (in_episode_) {
        buffers[k].policy.action_bootstrap = current_->out[k].value;
        buffers[k].policy.message_bootstrap = current_->out[k].message_value.value_or(0.0);
      } else {
        buffers[k].policy.action_bootstrap = 0.0;
        buffers[k].policy.message_bootstrap = 0.0;
      }
    }
  }

 private:
  const ExperimentConfig& cfg_;
  int n_;
  Rng rng_;
  std::uint64_t env_seed_;
  int stride_;
  int offset_;
  int episode_ = 0;
  bool in_episode_ = false;
  GridState env_;
  std::vector<RecurrentState> states_;
  std::vector<RecurrentState> moa_states_;
  std::optional<Decision> current_;
};

struct AgentGradient {
  AgentModel grad;
  LossReport report;
};

AgentGradient agent_gradient(const ExperimentConfig& cfg, const AgentModel& model,
                             const AgentBuffer& buffer) {
  AgentGradient g{{PolicyParams::zeros(model.policy.shape), std::nullopt}, {}};
  const LossWeights w{cfg.train.gamma, cfg.train.value_weight, cfg.train.entropy,
                      cfg.train.message_weight, cfg.train.message_entropy};
  const SegmentTargets targets = compute_targets(model.policy, buffer.policy, cfg.train.gamma);
  g.report = actor_critic_loss(model.policy, buffer.policy, targets, w, &g.grad.policy);
  if (model.moa) {
    g.grad.moa = MoaParams::zeros(model.moa->shape);
    const int pairs = count_moa_pairs(buffer.moa, cfg.moa.visible_only);
    if (pairs > 0 && cfg.moa.loss_weight > 0.0) {
      moa_segment_loss(*model.moa, model.policy.conv, buffer.moa, cfg.moa.visible_only,
                       cfg.moa.loss_weight / pairs, &*g.grad.moa,
                       model.moa->shape.shared_encoder ? &g.grad.policy.conv : nullptr);
    }
  }
  return g;
}

void apply_gradient(const ExperimentConfig& cfg, AgentModel& model, SgdOptimizer& optimizer,
                    const AgentGradient& g, double learning_rate) {
  const TensorList grads = agent_tensors(g.grad, "");
  require_finite_gradient(grads);
  clip_global_norm(grads, cfg.train.grad_clip);
  optimizer.step(agent_tensors(model, ""), grads, learning_rate, cfg.train.momentum);
}

// Trajectory log, windowed metrics and their files.
class RunLog {
 public:
  RunLog(const ExperimentConfig& cfg, const std::string& out_dir)
      : window_(cfg.log.window), options_(summary_options(cfg)) {
    if (!out_dir.empty() && cfg.log.trajectory) {
      trajectory_.open(out_dir + "/trajectory.csv");
      if (!trajectory_) throw ConfigError("cannot write " + out_dir + "/trajectory.csv");
      write_trajectory_header(trajectory_);
    }
  }

  void add(std::vector<TrajectoryRecord>& records) {
    std::lock_guard<std::mutex> lock(mu_);
    for (auto& r : records) {
      if (trajectory_.is_open()) write_record(trajectory_, r);
      pending_[r.step / window_].push_back(std::move(r));
    }
    records.clear();
  }

  // Summarizes every window that ends at or before `step`.
  void flush_before(long long step) {
    std::lock_guard<std::mutex> lock(mu_);
    flush_locked(step / window_);
  }

  std::vector<WindowRow> finish() {
    std::lock_guard<std::mutex> lock(mu_);
    flush_locked(std::numeric_limits<long long>::max());
    if (trajectory_.is_open()) trajectory_.flush();
    return rows_;
  }

 private:
  void flush_locked(long long below_window) {
    while (!pending_.empty() && pending_.begin()->first < below_window) {
      auto rows = summarize(pending_.begin()->second, window_, options_);
      rows_.insert(rows_.end(), rows.begin(), rows.end());
      pending_.erase(pending_.begin());
    }
  }

  long long window_;
  SummaryOptions options_;
  std::ofstream trajectory_;
  std::map<long long, std::vector<TrajectoryRecord>> pending_;
  std::vector<WindowRow> rows_;
  std::mutex mu_;
};

struct ParameterStore {
  std::vector<AgentModel> models;
  std::vector<SgdOptimizer> optimizers;
  std::mutex mu;
};

struct SharedProgress {
  std::atomic<long long> step{0};
  std::mutex mu;
  int episodes = 0;
  std::vector<double> episode_returns;
};

void run_worker(const ExperimentConfig& cfg, std::uint64_t seed, int worker, ParameterStore& store,
                SharedProgress& progress, RunLog& log) {
  const long long total = cfg.train.total_steps;
  const InfluenceConfig& inf = cfg.influence;
  Worker w(cfg, derive_seed(derive_seed(seed, 1), worker), derive_seed(derive_seed(seed, 2), worker),
           cfg.run.workers, worker);
  std::vector<AgentModel> local;
  std::vector<AgentBuffer> buffers;
  std::vector<TrajectoryRecord> records;
  double episode_return = 0.0;
  bool stop = false;
  while (!stop) {
    {
      std::lock_guard<std::mutex> lock(store.mu);
      local = store.models;
    }
    if (!w.in_episode()) {
      w.begin_episode(local);
      episode_return = 0.0;
    }
    w.open_buffers(buffers);
    long long last_step = -1;
    for (int t = 0; t < cfg.train.rollout_length; ++t) {
      const long long s = progress.step.fetch_add(1);
      if (s >= total) {
        stop = true;
        break;
      }
      last_step = s;
      w.advance(local, s, curriculum_weight(s, inf.curriculum_steps, inf.beta), &buffers, records);
      for (const auto& r : records) episode_return += r.extrinsic;
      log.add(records);
      if (cfg.run.workers == 1) log.flush_before(s);
      if (!w.in_episode()) {
        std::lock_guard<std::mutex> lock(progress.mu);
        ++progress.episodes;
        progress.episode_returns.push_back(episode_return);
        break;
      }
    }
    if (buffers.empty() || buffers.front().policy.size() == 0) continue;
    w.close_buffers(buffers);
    const double lr = annealed_learning_rate(cfg.train.lr_init, cfg.train.lr_end, last_step, total);
    std::vector<AgentGradient> grads;
    for (std::size_t k = 0; k < local.size(); ++k) grads.push_back(agent_gradient(cfg, local[k], buffers[k]));
    std::lock_guard<std::mutex> lock(store.mu);
    for (std::size_t k = 0; k < local.size(); ++k) {
      apply_gradient(cfg, store.models[k], store.optimizers[k], grads[k], lr);
    }
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

void write_metrics_file(const std::string& path, const std::vector<WindowRow>& rows) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  write_metrics(out, rows);
}

}  // namespace

TrainResult train(const ExperimentConfig& config, std::uint64_t seed, const std::string& out_dir) {
  config.validate();
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    ExperimentConfig echo = config;
    echo.run.seeds = {seed};
    write_text(out_dir + "/config.txt", to_text(echo));
  }
  ParameterStore store;
  store.models = initial_models(config, seed);
  store.optimizers.resize(store.models.size());
  SharedProgress progress;
  RunLog log(config, out_dir);

  auto save = [&] {
    if (out_dir.empty()) return;
    std::lock_guard<std::mutex> lock(store.mu);
    save_checkpoint(out_dir + "/checkpoint.bin", checkpoint_of(store.models));
  };
  try {
    if (config.run.workers == 1) {
      run_worker(config, seed, 0, store, progress, log);
    } else {
      std::vector<std::thread> threads;
      std::vector<std::exception_ptr> errors(config.run.workers);
      for (int w = 0; w < config.run.workers; ++w) {
        threads.emplace_back([&, w] {
          try {
            run_worker(config, seed, w, store, progress, log);
          } catch (...) {
            errors[w] = std::current_exception();
            progress.step.store(std::numeric_limits<long long>::max() / 2);
          }
        });
      }
      for (auto& t : threads) t.join();
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }
  } catch (const NumericError&) {
    save();
    if (!out_dir.empty()) write_metrics_file(out_dir + "/metrics.csv", log.finish());
    throw;
  }

  TrainResult result;
  result.seed = seed;
  result.steps = std::min(progress.step.load(), config.train.total_steps);
  result.episodes = progress.episodes;
  result.episode_returns = progress.episode_returns;
  result.metrics = log.finish();
  save();
  if (!out_dir.empty()) write_metrics_file(out_dir + "/metrics.csv", result.metrics);
  result.models = std::move(store.models);
  return result;
}

std::vector<TrainResult> run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<TrainResult> results;
  for (std::uint64_t seed : config.run.seeds) {
    results.push_back(train(config, seed, config.run.out + "/seed_" + std::to_string(seed)));
  }
  return results;
}

std::vector<EpisodeSummary> evaluate(const std::vector<AgentModel>& models,
                                     const ExperimentConfig& config, int episodes,
                                     std::uint64_t seed) {
  config.validate();
  SOCINF_REQUIRE(static_cast<int>(models.size()) == config.env.agent_count(),
                 "model count does not match the environment");
  for (int k = 0; k < static_cast<int>(models.size()); ++k) {
    if (!(models[k].policy.shape == policy_shape(config, k)) ||
        models[k].moa.has_value() != (config.influence.variant == InfluenceVariant::kMoa)) {
      throw ConfigError("model shapes do not match the configuration");
    }
  }
  const SummaryOptions options = summary_options(config);
  Worker w(config, derive_seed(seed, 11), derive_seed(seed, 12), 1, 0);
  std::vector<EpisodeSummary> out;
  long long step = 0;
  for (int e = 0; e < episodes; ++e) {
    w.begin_episode(models);
    std::vector<TrajectoryRecord> records;
    bool opened = false;
    while (w.in_episode()) {
      const EventLog events = w.advance(models, step++, config.influence.beta, nullptr, records);
      for (const auto& ev : events) opened = opened || ev.kind == EventKind::kBoxOpened;
    }
    EpisodeSummary s = summarize_records(records, options);
    s.episode = e;
    s.box_opened = opened;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<EpisodeSummary> evaluate(const std::string& checkpoint_path,
                                     const ExperimentConfig& config, int episodes,
                                     std::uint64_t seed) {
  return evaluate(models_from_checkpoint(config, load_checkpoint(checkpoint_path)), config,
                  episodes, seed);
}

std::vector<WindowRow> metrics_from_log(const std::string& run_dir) {
  const ExperimentConfig config = load_config(run_dir + "/config.txt");
  const auto records = read_trajectory_file(run_dir + "/trajectory.csv");
  return summarize(records, config.log.window, summary_options(config));
}

std::vector<BoxSeedResult> box_trapped_study(const ExperimentConfig& config, int eval_episodes) {
  if (config.env.kind != EnvKind::kBoxTrapped) throw ConfigError("the box study needs env.kind = boxtrapped");
  if (config.influence.variant == InfluenceVariant::kNone) {
    throw ConfigError("the box study needs an influence variant");
  }
  ExperimentConfig baseline = config;
  baseline.influence.beta = 0.0;
  std::vector<BoxSeedResult> out;
  for (std::uint64_t seed : config.run.seeds) {
    auto open_rate = [&](const ExperimentConfig& c) {
      const TrainResult r = train(c, seed);
      const auto summaries = evaluate(r.models, c, eval_episodes, derive_seed(seed, 99));
      int opened = 0;
      for (const auto& s : summaries) opened += s.box_opened ? 1 : 0;
      return eval_episodes > 0 ? static_cast<double>(opened) / eval_episodes : 0.0;
    };
    out.push_back({seed, open_rate(config), open_rate(baseline)});
  }
  return out;
}

}  // namespace socinf
