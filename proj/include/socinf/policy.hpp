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

#ifndef SOCINF_POLICY_HPP_
#define SOCINF_POLICY_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "socinf/grid.hpp"
#include "socinf/nn.hpp"
#include "socinf/rng.hpp"

namespace socinf {

struct PolicyShape {
  int view_size = 7;
  int n_agents = 1;
  int action_count = 8;
  int vocab_size = 0;        // 0 disables the message head
  int influencer_slots = 0;  // same-step influencer actions fed to influencees
  int conv_channels = 6;
  int fc_width = 32;
  int hidden = 32;

  bool has_comm() const { return vocab_size > 0; }
  // Recurrent input layout: [features | prev actions | prev messages | influencer actions].
  int feature_offset() const { return 0; }
  int prev_action_offset(int agent) const { return fc_width + agent * action_count; }
  int prev_message_offset(int agent) const {
    return fc_width + n_agents * action_count + agent * vocab_size;
  }
  int influencer_offset(int slot) const {
    return fc_width + n_agents * (action_count + vocab_size) + slot * action_count;
  }
  int recurrent_input_size() const { return influencer_offset(influencer_slots); }
  void validate() const;

  friend bool operator==(const PolicyShape&, const PolicyShape&) = default;
};

struct PolicyParams {
  PolicyShape shape;
  ViewConv conv;
  Dense fc1;
  Dense fc2;
  Gru gru;
  Dense action_head;
  Dense value_head;
  Dense message_head;        // empty without communication
  Dense message_value_head;  // empty without communication

  static PolicyParams zeros(const PolicyShape& shape);
  static PolicyParams initialized(const PolicyShape& shape, Rng& rng);
  TensorList tensors(const std::string& prefix = "");
  TensorList tensors(const std::string& prefix = "") const;
};

struct RecurrentState {
  Vec hidden;

  static RecurrentState zeros(int h) { return {Vec::Zero(h)}; }
  friend bool operator==(const RecurrentState& a, const RecurrentState& b) {
    return a.hidden.size() == b.hidden.size() && a.hidden == b.hidden;
  }
};

struct PolicyOutput {
  Vec action_dist;
  double value = 0.0;
  std::optional<Vec> message_dist;
  std::optional<double> message_value;
  RecurrentState next_state;
};

// Encoder activations kept for the backward pass.
struct EncoderCache {
  Vec conv;
  Vec fc1;
  Vec fc2;
};

Vec encode(const PolicyParams& params, const Observation& obs, EncoderCache* cache = nullptr);

// Builds the recurrent input from encoder features and the observation's
// one-hot action/message fields. kNone entries encode as all zeros.
Vec recurrent_input(const PolicyShape& shape, const Vec& features, const Observation& obs);

// Writes a one-hot block of `width` at `offset` (zeros for kNone).
void set_one_hot(Vec& input, int offset, int width, int index);

// Recurrent cell plus heads. Used directly by counterfactual evaluation,
// which perturbs slices of `input` and reuses the encoder features.
PolicyOutput core_step(const PolicyParams& params, const Vec& input, const RecurrentState& state,
                       Gru::Cache* cache = nullptr);

// Throws NumericError on any non-finite intermediate.
PolicyOutput forward(const PolicyParams& params, const Observation& obs,
                     const RecurrentState& state);

// Inverse-CDF draw. Throws ContractError unless `dist` is a probability vector.
int sample(const Vec& dist, Rng& rng);
int sample(std::span<const double> dist, Rng& rng);

// R_t = r_t + gamma R_{t+1}, with R_T = bootstrap.
std::vector<double> discounted_returns(std::span<const double> rewards, double gamma,
                                       double bootstrap);

// beta * min(1, step / C).
double curriculum_weight(long long step, long long curriculum_steps, double beta);

// Contiguous on-policy experience of one agent within one episode.
struct PolicySegment {
  RecurrentState initial_state;
  std::vector<Observation> observations;
  std::vector<int> actions;
  std::vector<int> messages;  // empty without communication
  std::vector<double> action_rewards;
  std::vector<double> message_rewards;
  double action_bootstrap = 0.0;
  double message_bootstrap = 0.0;

  int size() const { return static_cast<int>(observations.size()); }
};

struct LossWeights {
  double gamma = 0.99;
  double value_weight = 0.5;
  double entropy = 0.001;
  double message_weight = 1.0;
  double message_entropy = 0.001;
};

// Returns and advantages; advantages are treated as constants by the loss.
struct SegmentTargets {
  std::vector<double> returns;
  std::vector<double> advantages;
  std::vector<double> message_returns;
  std::vector<double> message_advantages;
};

SegmentTargets compute_targets(const PolicyParams& params, const PolicySegment& segment,
                               double gamma);

struct LossReport {
  double policy = 0.0;
  double value = 0.0;
  double entropy = 0.0;
  double message_policy = 0.0;
  double message_value = 0.0;
  double message_entropy = 0.0;
  double total = 0.0;
  int steps = 0;

  LossReport& operator+=(const LossReport& o);
};

// Summed (not averaged) actor-critic loss of one segment:
//   -A log pi(a) + value_weight * 0.5 (R - V)^2 - entropy * H(pi)
// plus message_weight times the same terms for the message head. When
// `grad` is given, gradients are accumulated into it by backpropagation
// through time.
LossReport actor_critic_loss(const PolicyParams& params, const PolicySegment& segment,
                             const SegmentTargets& targets, const LossWeights& weights,
                             PolicyParams* grad);

// Throws NumericError naming the first tensor with a non-finite entry.
void require_finite_gradient(const TensorList& grads);

// Rescales gradients so their global norm is at most `max_norm` (<= 0 disables).
// Returns the norm before clipping.
double clip_global_norm(const TensorList& grads, double max_norm);

// Linear anneal from lr_init to lr_end over `total_steps`.
double annealed_learning_rate(double lr_init, double lr_end, long long step,
                              long long total_steps);

}  // namespace socinf

#endif  // SOCINF_POLICY_HPP_
