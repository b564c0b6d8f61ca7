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

#ifndef SOCINF_MOA_HPP_
#define SOCINF_MOA_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "socinf/nn.hpp"
#include "socinf/policy.hpp"

namespace socinf {

struct MoaShape {
  int view_size = 7;
  int n_agents = 2;
  int action_count = 8;
  int conv_channels = 6;
  int fc_width = 32;
  int hidden = 32;
  bool shared_encoder = true;  // reuse the owner's policy convolution

  int blocks() const { return n_agents - 1; }
  // Recurrent input layout: [features | joint action one-hots].
  int action_offset(int agent) const { return fc_width + agent * action_count; }
  int input_size() const { return action_offset(n_agents); }
  void validate() const;

  friend bool operator==(const MoaShape&, const MoaShape&) = default;
};

// Predicts every other agent's next action from the owner's view and the
// current joint action.
struct MoaParams {
  MoaShape shape;
  ViewConv conv;  // empty when the encoder is shared
  Dense fc;
  Gru gru;
  Dense head;  // hidden -> blocks * action_count

  static MoaParams zeros(const MoaShape& shape);
  static MoaParams initialized(const MoaShape& shape, Rng& rng);
  TensorList tensors(const std::string& prefix = "");
  TensorList tensors(const std::string& prefix = "") const;
};

// Index of agent `other` among the owner's prediction blocks.
int moa_block(int owner, int other);
int moa_agent(int owner, int block);

struct MoaOutput {
  std::vector<Vec> dists;  // one per other agent, in id order
  RecurrentState next_state;
};

// Features entering the MOA cell: conv activations (shared or own) through
// the MOA's dense layer.
Vec moa_features(const MoaParams& params, const ViewConv& policy_conv, const Observation& obs);
Vec moa_input(const MoaShape& shape, const Vec& features, std::span<const int> joint_action);
MoaOutput moa_core(const MoaParams& params, const Vec& input, const RecurrentState& state,
                   Gru::Cache* cache = nullptr);

// Throws NumericError on non-finite values.
MoaOutput moa_forward(const MoaParams& params, const ViewConv& policy_conv,
                      const Observation& obs, std::span<const int> joint_action,
                      const RecurrentState& state);

struct MoaLoss {
  double value = 0.0;  // mean cross-entropy over counted pairs
  int pairs = 0;
  bool no_data = true;
};

// `predictions[t][b]` against `realized[t][b]`; pairs with mask 0 or a kNone
// target are skipped.
MoaLoss moa_loss(const std::vector<std::vector<Vec>>& predictions,
                 const std::vector<std::vector<int>>& realized,
                 const std::vector<std::vector<std::uint8_t>>& mask);

// One owner's contiguous experience. Step t pairs the owner's observation
// and joint action a_t with the others' actions a_{t+1}.
struct MoaSegment {
  RecurrentState initial_state;
  std::vector<Observation> observations;
  std::vector<std::vector<int>> joint_actions;
  std::vector<std::vector<int>> targets;        // per block; kNone when unknown
  std::vector<std::vector<std::uint8_t>> visible;  // per block

  int size() const { return static_cast<int>(observations.size()); }
};

int count_moa_pairs(const MoaSegment& segment, bool visible_only);

// Summed cross-entropy over the segment's counted pairs. With `grad`, adds
// `grad_scale` times its gradient; conv gradients go to `conv_grad` when the
// encoder is shared.
MoaLoss moa_segment_loss(const MoaParams& params, const ViewConv& policy_conv,
                         const MoaSegment& segment, bool visible_only, double grad_scale,
                         MoaParams* grad, ViewConv* conv_grad);

// One SGD step on weight * mean loss over the batch. Returns the loss before
// the step. A zero weight leaves every parameter unchanged.
MoaLoss moa_update(MoaParams& params, ViewConv& policy_conv, std::span<const MoaSegment> batch,
                   bool visible_only, double weight, double learning_rate,
                   SgdOptimizer& optimizer, double momentum = 0.0);

}  // namespace socinf

#endif  // SOCINF_MOA_HPP_
