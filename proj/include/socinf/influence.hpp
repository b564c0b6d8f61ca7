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

#ifndef SOCINF_INFLUENCE_HPP_
#define SOCINF_INFLUENCE_HPP_

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "socinf/moa.hpp"
#include "socinf/nn.hpp"
#include "socinf/policy.hpp"

namespace socinf {

enum class InfluenceVariant { kNone, kBasic, kComm, kMoa };
enum class Divergence { kKl, kJsd, kPmi };
enum class CounterfactualPrior { kInfluencerPolicy, kUniform };

std::string_view to_string(InfluenceVariant v);
std::string_view to_string(Divergence d);
std::string_view to_string(CounterfactualPrior p);
InfluenceVariant parse_influence_variant(std::string_view text);
Divergence parse_divergence(std::string_view text);
CounterfactualPrior parse_counterfactual_prior(std::string_view text);

struct InfluenceConfig {
  InfluenceVariant variant = InfluenceVariant::kNone;
  Divergence divergence = Divergence::kKl;
  CounterfactualPrior prior = CounterfactualPrior::kInfluencerPolicy;
  double alpha = 1.0;
  double beta = 0.0;
  long long curriculum_steps = 100000;
  std::vector<int> influencers;  // Basic only
  bool visibility_gate = true;   // MOA only
  bool influencee_reward = false;  // Basic only

  // Throws ConfigError.
  void validate(int n_agents) const;
  bool is_influencer(int agent) const;
};

// Floor applied to every probability before log-ratios.
inline constexpr double kProbabilityFloor = 1e-9;

// Floors at kProbabilityFloor and renormalizes.
Vec smooth(const Vec& p);

double kl(const Vec& p, const Vec& q);
double jsd(const Vec& p, const Vec& q);
// ln(p_cond[a] / p_marg[a]). Throws NumericError when the marginal is zero.
double pmi(const Vec& p_cond, const Vec& p_marg, int realized_action);

// D[p_cond || p_marg]; PMI needs the influencee's realized action.
double divergence(Divergence d, const Vec& p_cond, const Vec& p_marg, int realized_action);

// Influencee action distribution given a counterfactual influencer choice.
using ConditionalPolicyFn = std::function<Vec(int)>;

Vec marginal_policy(std::span<const Vec> conditionals, const Vec& prior);
Vec marginal_policy(const ConditionalPolicyFn& cond, const Vec& prior);

Vec uniform_prior(int size);

// One influencee as seen from the influencer: its conditionals (one per
// counterfactual choice), realized action (PMI only) and whether it counts.
struct InfluenceTarget {
  int agent = 0;
  std::vector<Vec> conditionals;
  int realized_action = kNone;
  bool counted = true;
};

struct InfluenceResult {
  double total = 0.0;
  std::vector<double> per_agent;  // indexed by influencee id
};

// Sum over counted targets of D[p(.|realized choice) || marginal].
InfluenceResult counterfactual_influence(std::span<const InfluenceTarget> targets,
                                         const Vec& prior, int realized_choice, Divergence d,
                                         int n_agents);

// Conditionals of a policy whose recurrent input holds the influencer's
// choice as a one-hot block at `offset`.
std::vector<Vec> policy_conditionals(const PolicyParams& params, const Vec& base_input,
                                     const RecurrentState& state, int offset, int width);

// Conditionals of an owner's model of others for the block predicting
// `target`, varying the owner's own action.
std::vector<Vec> moa_conditionals(const MoaParams& params, const Vec& base_input,
                                  const RecurrentState& state, int owner, int target);

// Per-influencee context captured before the influencee acts.
struct InfluenceeContext {
  int agent = 0;
  const PolicyParams* params = nullptr;
  Vec input;  // recurrent input with the influencer's choice already written
  RecurrentState state;
  int realized_action = kNone;
};

// Same-step influence of influencer `k` whose choice sits in slot `slot` of
// every influencee's recurrent input.
InfluenceResult basic_influence(int slot, std::span<const InfluenceeContext> influencees,
                                const Vec& prior, int realized_action, Divergence d,
                                int n_agents);

// Influence of k's previous message on each listener's current action.
InfluenceResult comm_influence(int k, std::span<const InfluenceeContext> listeners,
                               const Vec& prior, int realized_message, Divergence d,
                               int n_agents);

// Influence of k's action on the others' next actions as predicted by k's
// own model of others. `visible[j]` gates j when the gate is on;
// `realized_next` (PMI only) holds the others' next actions.
InfluenceResult moa_influence(int k, const MoaParams& moa, const Vec& moa_input_vec,
                              const RecurrentState& moa_state, std::span<const int> joint_action,
                              std::span<const std::uint8_t> visible, bool visibility_gate,
                              const Vec& prior, Divergence d,
                              std::span<const int> realized_next = {});

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
};

// Mean of per-sample influence values. Throws ContractError when empty.
MonteCarloEstimate mi_monte_carlo(std::span<const double> samples);

}  // namespace socinf

#endif  // SOCINF_INFLUENCE_HPP_
