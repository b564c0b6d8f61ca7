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

#include "socinf/influence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "socinf/error.hpp"

namespace socinf {

std::string_view to_string(InfluenceVariant v) {
  switch (v) {
    case InfluenceVariant::kNone: return "none";
    case InfluenceVariant::kBasic: return "basic";
    case InfluenceVariant::kComm: return "comm";
    case InfluenceVariant::kMoa: return "moa";
  }
  return "?";
}

std::string_view to_string(Divergence d) {
  switch (d) {
    case Divergence::kKl: return "kl";
    case Divergence::kJsd: return "jsd";
    case Divergence::kPmi: return "pmi";
  }
  return "?";
}

std::string_view to_string(CounterfactualPrior p) {
  return p == CounterfactualPrior::kUniform ? "uniform" : "policy";
}

InfluenceVariant parse_influence_variant(std::string_view text) {
  for (auto v : {InfluenceVariant::kNone, InfluenceVariant::kBasic, InfluenceVariant::kComm,
                 InfluenceVariant::kMoa}) {
    if (text == to_string(v)) return v;
  }
  throw ConfigError("unknown influence variant '" + std::string(text) + "'");
}

Divergence parse_divergence(std::string_view text) {
  for (auto d : {Divergence::kKl, Divergence::kJsd, Divergence::kPmi}) {
    if (text == to_string(d)) return d;
  }
  throw ConfigError("unknown divergence '" + std::string(text) + "'");
}

CounterfactualPrior parse_counterfactual_prior(std::string_view text) {
  if (text == "policy") return CounterfactualPrior::kInfluencerPolicy;
  if (text == "uniform") return CounterfactualPrior::kUniform;
  throw ConfigError("unknown counterfactual prior '" + std::string(text) + "'");
}

void InfluenceConfig::validate(int n_agents) const {
  if (alpha < 0.0 || beta < 0.0) throw ConfigError("alpha and beta must be nonnegative");
  if (curriculum_steps < 1) throw ConfigError("curriculum steps must be >= 1");
  if (variant == InfluenceVariant::kBasic) {
    if (influencers.empty()) throw ConfigError("basic influence needs at least one influencer");
    if (static_cast<int>(influencers.size()) >= n_agents) {
      throw ConfigError("influencer and influencee sets must be disjoint and nonempty");
    }
    std::vector<int> sorted = influencers;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ConfigError("influencer list has duplicates");
    }
    for (int k : influencers) {
      if (k < 0 || k >= n_agents) throw ConfigError("influencer index out of range");
    }
  } else if (!influencers.empty()) {
    throw ConfigError("an influencer list applies to the basic variant only");
  }
  if (variant == InfluenceVariant::kMoa && divergence == Divergence::kPmi) {
    throw ConfigError("the model-of-others variant supports kl and jsd only");
  }
  if (variant != InfluenceVariant::kNone && n_agents < 2) {
    throw ConfigError("influence needs at least two agents");
  }
}

bool InfluenceConfig::is_influencer(int agent) const {
  return std::find(influencers.begin(), influencers.end(), agent) != influencers.end();
}

Vec smooth(const Vec& p) {
  const Vec floored = p.cwiseMax(kProbabilityFloor);
  return floored / floored.sum();
}

namespace {

void require_dist_pair(const Vec& p, const Vec& q) {
  SOCINF_REQUIRE(p.size() == q.size(), "distributions differ in length");
  SOCINF_REQUIRE(p.size() > 0, "empty distribution");
}

double raw_kl(const Vec& p, const Vec& q) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) s += p[i] * std::log(p[i] / q[i]);
  return std::max(0.0, s);
}

}  // namespace

double kl(const Vec& p, const Vec& q) {
  require_dist_pair(p, q);
  return raw_kl(smooth(p), smooth(q));
}

double jsd(const Vec& p, const Vec& q) {
  require_dist_pair(p, q);
  const Vec ps = smooth(p);
  const Vec qs = smooth(q);
  const Vec m = 0.5 * (ps + qs);
  return std::min(std::log(2.0), 0.5 * raw_kl(ps, m) + 0.5 * raw_kl(qs, m));
}

double pmi(const Vec& p_cond, const Vec& p_marg, int realized_action) {
  require_dist_pair(p_cond, p_marg);
  SOCINF_REQUIRE(realized_action >= 0 && realized_action < p_cond.size(),
                 "realized action out of range");
  const double c = smooth(p_cond)[realized_action];
  const double m = smooth(p_marg)[realized_action];
  if (!(m > 0.0) || !(c > 0.0)) throw NumericError("zero probability in pointwise information");
  return std::log(c / m);
}

double divergence(Divergence d, const Vec& p_cond, const Vec& p_marg, int realized_action) {
  switch (d) {
    case Divergence::kKl: return kl(p_cond, p_marg);
    case Divergence::kJsd: return jsd(p_cond, p_marg);
    case Divergence::kPmi: return pmi(p_cond, p_marg, realized_action);
  }
  return 0.0;
}

namespace {

void require_prior(const Vec& prior) {
  SOCINF_REQUIRE(prior.size() > 0, "empty counterfactual prior");
  SOCINF_REQUIRE(prior.minCoeff() >= 0.0, "negative prior weight");
  SOCINF_REQUIRE(std::abs(prior.sum() - 1.0) <= 1e-6, "counterfactual prior is not normalized");
}

}  // namespace

Vec marginal_policy(std::span<const Vec> conditionals, const Vec& prior) {
  require_prior(prior);
  SOCINF_REQUIRE(static_cast<Eigen::Index>(conditionals.size()) == prior.size(),
                 "one conditional per counterfactual required");
  Vec m = Vec::Zero(conditionals.front().size());
  for (std::size_t i = 0; i < conditionals.size(); ++i) {
    SOCINF_REQUIRE(conditionals[i].size() == m.size(), "conditionals differ in length");
    m += prior[static_cast<Eigen::Index>(i)] * conditionals[i];
  }
  return m / m.sum();
}

Vec marginal_policy(const ConditionalPolicyFn& cond, const Vec& prior) {
  std::vector<Vec> table;
  table.reserve(prior.size());
  for (Eigen::Index i = 0; i < prior.size(); ++i) table.push_back(cond(static_cast<int>(i)));
  return marginal_policy(table, prior);
}

Vec uniform_prior(int size) {
  SOCINF_REQUIRE(size > 0, "prior size must be positive");
  return Vec::Constant(size, 1.0 / size);
}

InfluenceResult counterfactual_influence(std::span<const InfluenceTarget> targets,
                                         const Vec& prior, int realized_choice, Divergence d,
                                         int n_agents) {
  SOCINF_REQUIRE(realized_choice >= 0 && realized_choice < prior.size(),
                 "realized choice out of range");
  InfluenceResult out;
  out.per_agent.assign(n_agents, 0.0);
  for (const InfluenceTarget& t : targets) {
    if (!t.counted) continue;
    SOCINF_REQUIRE(t.agent >= 0 && t.agent < n_agents, "influencee index out of range");
    const Vec marginal = marginal_policy(t.conditionals, prior);
    const double v = divergence(d, t.conditionals[realized_choice], marginal, t.realized_action);
    out.per_agent[t.agent] += v;
    out.total += v;
  }
  return out;
}

std::vector<Vec> policy_conditionals(const PolicyParams& params, const Vec& base_input,
                                     const RecurrentState& state, int offset, int width) {
  std::vector<Vec> out;
  out.reserve(width);
  Vec input = base_input;
  for (int c = 0; c < width; ++c) {
    set_one_hot(input, offset, width, c);
    out.push_back(core_step(params, input, state).action_dist);
  }
  return out;
}

std::vector<Vec> moa_conditionals(const MoaParams& params, const Vec& base_input,
                                  const RecurrentState& state, int owner, int target) {
  const MoaShape& s = params.shape;
  const int block = moa_block(owner, target);
  std::vector<Vec> out;
  out.reserve(s.action_count);
  Vec input = base_input;
  for (int a = 0; a < s.action_count; ++a) {
    set_one_hot(input, s.action_offset(owner), s.action_count, a);
    out.push_back(moa_core(params, input, state).dists[block]);
  }
  return out;
}

namespace {

InfluenceResult policy_influence(std::span<const InfluenceeContext> influencees, int offset_of_k,
                                 bool offset_is_message, int k, const Vec& prior, int realized,
                                 Divergence d, int n_agents) {
  std::vector<InfluenceTarget> targets;
  targets.reserve(influencees.size());
  for (const InfluenceeContext& c : influencees) {
    SOCINF_REQUIRE(c.params != nullptr, "influencee context without parameters");
    const PolicyShape& shape = c.params->shape;
    const int offset = offset_is_message ? shape.prev_message_offset(k)
                                         : shape.influencer_offset(offset_of_k);
    const int width = offset_is_message ? shape.vocab_size : shape.action_count;
    SOCINF_REQUIRE(width == prior.size(), "prior size does not match the counterfactual set");
    targets.push_back({c.agent, policy_conditionals(*c.params, c.input, c.state, offset, width),
                       c.realized_action, true});
  }
  return counterfactual_influence(targets, prior, realized, d, n_agents);
}

}  // namespace

InfluenceResult basic_influence(int slot, std::span<const InfluenceeContext> influencees,
                                const Vec& prior, int realized_action, Divergence d,
                                int n_agents) {
  return policy_influence(influencees, slot, false, -1, prior, realized_action, d, n_agents);
}

InfluenceResult comm_influence(int k, std::span<const InfluenceeContext> listeners,
                               const Vec& prior, int realized_message, Divergence d,
                               int n_agents) {
  for (const auto& c : listeners) SOCINF_REQUIRE(c.agent != k, "a speaker does not listen to itself");
  return policy_influence(listeners, 0, true, k, prior, realized_message, d, n_agents);
}

InfluenceResult moa_influence(int k, const MoaParams& moa, const Vec& moa_input_vec,
                              const RecurrentState& moa_state, std::span<const int> joint_action,
                              std::span<const std::uint8_t> visible, bool visibility_gate,
                              const Vec& prior, Divergence d, std::span<const int> realized_next) {
  const MoaShape& s = moa.shape;
  SOCINF_REQUIRE(static_cast<int>(joint_action.size()) == s.n_agents,
                 "joint action has the wrong length");
  SOCINF_REQUIRE(static_cast<int>(visible.size()) == s.n_agents, "visibility has the wrong length");
  SOCINF_REQUIRE(prior.size() == s.action_count, "prior size does not match the action set");
  std::vector<InfluenceTarget> targets;
  for (int j = 0; j < s.n_agents; ++j) {
    if (j == k) continue;
    InfluenceTarget t;
    t.agent = j;
    t.counted = !visibility_gate || visible[j];
    if (!realized_next.empty()) t.realized_action = realized_next[j];
    if (t.counted) t.conditionals = moa_conditionals(moa, moa_input_vec, moa_state, k, j);
    targets.push_back(std::move(t));
  }
  return counterfactual_influence(targets, prior, joint_action[k], d, s.n_agents);
}

MonteCarloEstimate mi_monte_carlo(std::span<const double> samples) {
  SOCINF_REQUIRE(!samples.empty(), "no samples for the Monte-Carlo estimate");
  MonteCarloEstimate e;
  e.samples = samples.size();
  double sum = 0.0;
  for (double v : samples) sum += v;
  e.mean = sum / static_cast<double>(samples.size());
  if (samples.size() > 1) {
    double ss = 0.0;
    for (double v : samples) ss += (v - e.mean) * (v - e.mean);
    const double var = ss / static_cast<double>(samples.size() - 1);
    e.standard_error = std::sqrt(var / static_cast<double>(samples.size()));
  }
  return e;
}

}  // namespace socinf
