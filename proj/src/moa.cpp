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

#include "socinf/moa.hpp"

#include <cmath>

#include "socinf/error.hpp"

namespace socinf {

void MoaShape::validate() const {
  if (n_agents < 2) throw ConfigError("a model of other agents needs at least two agents");
  if (view_size < 3 || view_size % 2 == 0) throw ConfigError("view size must be odd and >= 3");
  if (action_count < 2) throw ConfigError("action count must be >= 2");
  if (conv_channels < 1 || fc_width < 1 || hidden < 1) {
    throw ConfigError("layer widths must be positive");
  }
}

MoaParams MoaParams::zeros(const MoaShape& shape) {
  shape.validate();
  MoaParams p;
  p.shape = shape;
  const int conv_out = (shape.view_size - 2) * (shape.view_size - 2) * shape.conv_channels;
  if (!shape.shared_encoder) p.conv = ViewConv::zeros(shape.view_size, shape.conv_channels);
  p.fc = Dense::zeros(conv_out, shape.fc_width);
  p.gru = Gru::zeros(shape.input_size(), shape.hidden);
  p.head = Dense::zeros(shape.hidden, shape.blocks() * shape.action_count);
  return p;
}

MoaParams MoaParams::initialized(const MoaShape& shape, Rng& rng) {
  MoaParams p = zeros(shape);
  if (!shape.shared_encoder) p.conv.init(rng);
  p.fc.init(rng, std::sqrt(2.0));
  p.gru.init(rng);
  p.head.init(rng, 0.01);
  return p;
}

TensorList MoaParams::tensors(const std::string& prefix) {
  TensorList out;
  if (!shape.shared_encoder) conv.append_to(out, prefix + "conv");
  fc.append_to(out, prefix + "fc");
  gru.append_to(out, prefix + "gru");
  head.append_to(out, prefix + "head");
  return out;
}

TensorList MoaParams::tensors(const std::string& prefix) const {
  return const_cast<MoaParams*>(this)->tensors(prefix);
}

int moa_block(int owner, int other) {
  SOCINF_REQUIRE(owner != other, "an agent has no prediction block for itself");
  return other < owner ? other : other - 1;
}

int moa_agent(int owner, int block) { return block < owner ? block : block + 1; }

namespace {

const ViewConv& encoder(const MoaParams& params, const ViewConv& policy_conv) {
  return params.shape.shared_encoder ? policy_conv : params.conv;
}

}  // namespace

Vec moa_features(const MoaParams& params, const ViewConv& policy_conv, const Observation& obs) {
  return params.fc.forward(encoder(params, policy_conv).forward(obs)).cwiseMax(0.0);
}

Vec moa_input(const MoaShape& shape, const Vec& features, std::span<const int> joint_action) {
  SOCINF_REQUIRE(static_cast<int>(joint_action.size()) == shape.n_agents,
                 "joint action has the wrong length");
  Vec in = Vec::Zero(shape.input_size());
  in.head(shape.fc_width) = features;
  for (int k = 0; k < shape.n_agents; ++k) {
    set_one_hot(in, shape.action_offset(k), shape.action_count, joint_action[k]);
  }
  return in;
}

MoaOutput moa_core(const MoaParams& params, const Vec& input, const RecurrentState& state,
                   Gru::Cache* cache) {
  const MoaShape& s = params.shape;
  MoaOutput out;
  out.next_state.hidden = params.gru.forward(input, state.hidden, cache);
  require_finite(out.next_state.hidden, "model-of-others state");
  const Vec logits = params.head.forward(out.next_state.hidden);
  require_finite(logits, "model-of-others logits");
  out.dists.reserve(s.blocks());
  for (int b = 0; b < s.blocks(); ++b) {
    out.dists.push_back(softmax(logits.segment(b * s.action_count, s.action_count)));
  }
  return out;
}

MoaOutput moa_forward(const MoaParams& params, const ViewConv& policy_conv,
                      const Observation& obs, std::span<const int> joint_action,
                      const RecurrentState& state) {
  SOCINF_REQUIRE(state.hidden.size() == params.shape.hidden, "recurrent state width mismatch");
  const Vec features = moa_features(params, policy_conv, obs);
  require_finite(features, "model-of-others features");
  return moa_core(params, moa_input(params.shape, features, joint_action), state);
}

MoaLoss moa_loss(const std::vector<std::vector<Vec>>& predictions,
                 const std::vector<std::vector<int>>& realized,
                 const std::vector<std::vector<std::uint8_t>>& mask) {
  SOCINF_REQUIRE(predictions.size() == realized.size() && realized.size() == mask.size(),
                 "predictions, targets and mask must have one entry per step");
  MoaLoss out;
  double sum = 0.0;
  for (std::size_t t = 0; t < predictions.size(); ++t) {
    SOCINF_REQUIRE(predictions[t].size() == realized[t].size() &&
                       realized[t].size() == mask[t].size(),
                   "mask length must equal the number of other agents");
    for (std::size_t b = 0; b < predictions[t].size(); ++b) {
      if (!mask[t][b] || realized[t][b] == kNone) continue;
      const Vec& p = predictions[t][b];
      SOCINF_REQUIRE(realized[t][b] >= 0 && realized[t][b] < p.size(), "target out of range");
      sum -= std::log(std::max(p[realized[t][b]], 1e-300));
      ++out.pairs;
    }
  }
  out.no_data = out.pairs == 0;
  out.value = out.no_data ? 0.0 : sum / out.pairs;
  return out;
}

int count_moa_pairs(const MoaSegment& segment, bool visible_only) {
  int pairs = 0;
  for (int t = 0; t < segment.size(); ++t) {
    for (std::size_t b = 0; b < segment.targets[t].size(); ++b) {
      if (segment.targets[t][b] == kNone) continue;
      if (visible_only && !segment.visible[t][b]) continue;
      ++pairs;
    }
  }
  return pairs;
}

MoaLoss moa_segment_loss(const MoaParams& params, const ViewConv& policy_conv,
                         const MoaSegment& segment, bool visible_only, double grad_scale,
                         MoaParams* grad, ViewConv* conv_grad) {
  const MoaShape& s = params.shape;
  const int T = segment.size();
  SOCINF_REQUIRE(static_cast<int>(segment.joint_actions.size()) == T &&
                     static_cast<int>(segment.targets.size()) == T &&
                     static_cast<int>(segment.visible.size()) == T,
                 "model-of-others segment fields must have one entry per step");
  const ViewConv& conv = encoder(params, policy_conv);
  if (grad != nullptr && s.shared_encoder) {
    SOCINF_REQUIRE(conv_grad != nullptr, "shared encoder needs a conv gradient target");
  }
  struct StepCache {
    Vec conv;
    Vec fc;
    Gru::Cache cell;
    Vec dh;
  };
  std::vector<StepCache> caches(grad != nullptr ? T : 0);

  MoaLoss out;
  double sum = 0.0;
  RecurrentState state = segment.initial_state;
  for (int t = 0; t < T; ++t) {
    const Observation& obs = segment.observations[t];
    Vec conv_out = conv.forward(obs);
    Vec fc_out = params.fc.forward(conv_out).cwiseMax(0.0);
    const Vec input = moa_input(s, fc_out, segment.joint_actions[t]);
    Gru::Cache cell;
    Vec h = params.gru.forward(input, state.hidden, grad != nullptr ? &cell : nullptr);
    require_finite(h, "model-of-others state");
    const Vec logits = params.head.forward(h);
    require_finite(logits, "model-of-others logits");
    Vec dlogits;
    if (grad != nullptr) dlogits = Vec::Zero(logits.size());
    for (int b = 0; b < s.blocks(); ++b) {
      const int target = segment.targets[t][b];
      if (target == kNone || (visible_only && !segment.visible[t][b])) continue;
      SOCINF_REQUIRE(target >= 0 && target < s.action_count, "target out of range");
      const Vec block = logits.segment(b * s.action_count, s.action_count);
      const Vec logp = log_softmax(block);
      sum -= logp[target];
      ++out.pairs;
      if (grad != nullptr) {
        Vec d = logp.array().exp();
        d[target] -= 1.0;
        dlogits.segment(b * s.action_count, s.action_count) = grad_scale * d;
      }
    }
    if (grad != nullptr) {
      StepCache& c = caches[t];
      c.dh = params.head.backward(h, dlogits, grad->head);
      c.conv = std::move(conv_out);
      c.fc = std::move(fc_out);
      c.cell = std::move(cell);
    }
    state.hidden = std::move(h);
  }
  out.no_data = out.pairs == 0;
  out.value = sum;
  if (!std::isfinite(sum)) throw NumericError("non-finite model-of-others loss");
  if (grad == nullptr) return out;

  ViewConv& conv_target = s.shared_encoder ? *conv_grad : grad->conv;
  Vec dh_next = Vec::Zero(s.hidden);
  for (int t = T - 1; t >= 0; --t) {
    StepCache& c = caches[t];
    Vec dx;
    dh_next = params.gru.backward(c.cell, c.dh + dh_next, grad->gru, &dx);
    const Vec dfc = (c.fc.array() > 0.0).select(dx.head(s.fc_width), 0.0);
    const Vec dconv = params.fc.backward(c.conv, dfc, grad->fc);
    conv.backward(segment.observations[t], c.conv, dconv, conv_target);
  }
  return out;
}

MoaLoss moa_update(MoaParams& params, ViewConv& policy_conv, std::span<const MoaSegment> batch,
                   bool visible_only, double weight, double learning_rate,
                   SgdOptimizer& optimizer, double momentum) {
  int pairs = 0;
  for (const auto& seg : batch) pairs += count_moa_pairs(seg, visible_only);
  MoaLoss report;
  report.pairs = pairs;
  report.no_data = pairs == 0;
  if (pairs == 0) return report;
  MoaParams grad = MoaParams::zeros(params.shape);
  ViewConv conv_grad = ViewConv::zeros(policy_conv.view_size, policy_conv.channels());
  double sum = 0.0;
  for (const auto& seg : batch) {
    sum += moa_segment_loss(params, policy_conv, seg, visible_only, weight / pairs, &grad,
                            &conv_grad)
               .value;
  }
  report.value = sum / pairs;
  if (weight == 0.0) return report;
  TensorList p = params.tensors();
  TensorList g = grad.tensors();
  if (params.shape.shared_encoder) {
    policy_conv.append_to(p, "policy_conv");
    conv_grad.append_to(g, "policy_conv");
  }
  require_finite_gradient(g);
  optimizer.step(p, g, learning_rate, momentum);
  return report;
}

}  // namespace socinf
