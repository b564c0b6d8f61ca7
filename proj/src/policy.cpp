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

#include "socinf/policy.hpp"

#include <algorithm>
#include <cmath>

#include "socinf/error.hpp"

namespace socinf {

void PolicyShape::validate() const {
  if (view_size < 3 || view_size % 2 == 0) throw ConfigError("view size must be odd and >= 3");
  if (n_agents < 1) throw ConfigError("policy needs at least one agent");
  if (action_count < 2) throw ConfigError("action count must be >= 2");
  if (vocab_size < 0 || vocab_size == 1) throw ConfigError("vocabulary size must be 0 or >= 2");
  if (influencer_slots < 0 || (influencer_slots > 0 && influencer_slots >= n_agents)) {
    throw ConfigError("influencer slots must be fewer than agents");
  }
  if (conv_channels < 1 || fc_width < 1 || hidden < 1) {
    throw ConfigError("layer widths must be positive");
  }
}

PolicyParams PolicyParams::zeros(const PolicyShape& shape) {
  shape.validate();
  PolicyParams p;
  p.shape = shape;
  p.conv = ViewConv::zeros(shape.view_size, shape.conv_channels);
  p.fc1 = Dense::zeros(p.conv.output_size(), shape.fc_width);
  p.fc2 = Dense::zeros(shape.fc_width, shape.fc_width);
  p.gru = Gru::zeros(shape.recurrent_input_size(), shape.hidden);
  p.action_head = Dense::zeros(shape.hidden, shape.action_count);
  p.value_head = Dense::zeros(shape.hidden, 1);
  if (shape.has_comm()) {
    p.message_head = Dense::zeros(shape.hidden, shape.vocab_size);
    p.message_value_head = Dense::zeros(shape.hidden, 1);
  }
  return p;
}

PolicyParams PolicyParams::initialized(const PolicyShape& shape, Rng& rng) {
  PolicyParams p = zeros(shape);
  p.conv.init(rng);
  p.fc1.init(rng, std::sqrt(2.0));
  p.fc2.init(rng, std::sqrt(2.0));
  p.gru.init(rng);
  p.action_head.init(rng, 0.01);
  p.value_head.init(rng, 1.0);
  if (shape.has_comm()) {
    p.message_head.init(rng, 0.01);
    p.message_value_head.init(rng, 1.0);
  }
  return p;
}

TensorList PolicyParams::tensors(const std::string& prefix) {
  TensorList out;
  conv.append_to(out, prefix + "conv");
  fc1.append_to(out, prefix + "fc1");
  fc2.append_to(out, prefix + "fc2");
  gru.append_to(out, prefix + "gru");
  action_head.append_to(out, prefix + "action_head");
  value_head.append_to(out, prefix + "value_head");
  if (shape.has_comm()) {
    message_head.append_to(out, prefix + "message_head");
    message_value_head.append_to(out, prefix + "message_value_head");
  }
  return out;
}

TensorList PolicyParams::tensors(const std::string& prefix) const {
  return const_cast<PolicyParams*>(this)->tensors(prefix);
}

Vec encode(const PolicyParams& params, const Observation& obs, EncoderCache* cache) {
  Vec conv = params.conv.forward(obs);
  Vec h1 = params.fc1.forward(conv).cwiseMax(0.0);
  Vec h2 = params.fc2.forward(h1).cwiseMax(0.0);
  if (cache != nullptr) {
    cache->conv = std::move(conv);
    cache->fc1 = std::move(h1);
    cache->fc2 = h2;
  }
  return h2;
}

void set_one_hot(Vec& input, int offset, int width, int index) {
  input.segment(offset, width).setZero();
  if (index == kNone) return;
  SOCINF_REQUIRE(index >= 0 && index < width, "one-hot index out of range");
  input[offset + index] = 1.0;
}

Vec recurrent_input(const PolicyShape& shape, const Vec& features, const Observation& obs) {
  SOCINF_REQUIRE(features.size() == shape.fc_width, "feature width mismatch");
  Vec in = Vec::Zero(shape.recurrent_input_size());
  in.head(shape.fc_width) = features;
  if (!obs.prev_actions.empty()) {
    SOCINF_REQUIRE(static_cast<int>(obs.prev_actions.size()) == shape.n_agents,
                   "previous joint action has the wrong length");
    for (int k = 0; k < shape.n_agents; ++k) {
      set_one_hot(in, shape.prev_action_offset(k), shape.action_count, obs.prev_actions[k]);
    }
  }
  if (shape.has_comm() && !obs.prev_messages.empty()) {
    SOCINF_REQUIRE(static_cast<int>(obs.prev_messages.size()) == shape.n_agents,
                   "previous messages have the wrong length");
    for (int k = 0; k < shape.n_agents; ++k) {
      set_one_hot(in, shape.prev_message_offset(k), shape.vocab_size, obs.prev_messages[k]);
    }
  }
  SOCINF_REQUIRE(static_cast<int>(obs.influencer_actions.size()) <= shape.influencer_slots,
                 "more influencer actions than slots");
  for (std::size_t s = 0; s < obs.influencer_actions.size(); ++s) {
    set_one_hot(in, shape.influencer_offset(static_cast<int>(s)), shape.action_count,
                obs.influencer_actions[s]);
  }
  return in;
}

PolicyOutput core_step(const PolicyParams& params, const Vec& input, const RecurrentState& state,
                       Gru::Cache* cache) {
  PolicyOutput out;
  out.next_state.hidden = params.gru.forward(input, state.hidden, cache);
  require_finite(out.next_state.hidden, "recurrent state");
  const Vec& h = out.next_state.hidden;
  const Vec logits = params.action_head.forward(h);
  require_finite(logits, "action logits");
  out.action_dist = softmax(logits);
  const Vec v = params.value_head.forward(h);
  require_finite(v, "value");
  out.value = v[0];
  if (params.shape.has_comm()) {
    const Vec mlogits = params.message_head.forward(h);
    require_finite(mlogits, "message logits");
    out.message_dist = softmax(mlogits);
    const Vec mv = params.message_value_head.forward(h);
    require_finite(mv, "message value");
    out.message_value = mv[0];
  }
  return out;
}

PolicyOutput forward(const PolicyParams& params, const Observation& obs,
                     const RecurrentState& state) {
  SOCINF_REQUIRE(state.hidden.size() == params.shape.hidden, "recurrent state width mismatch");
  const Vec features = encode(params, obs);
  require_finite(features, "encoder features");
  return core_step(params, recurrent_input(params.shape, features, obs), state);
}

int sample(std::span<const double> dist, Rng& rng) {
  SOCINF_REQUIRE(!dist.empty(), "empty distribution");
  double total = 0.0;
  for (double p : dist) {
    SOCINF_REQUIRE(p >= 0.0 && std::isfinite(p), "distribution has a negative or non-finite entry");
    total += p;
  }
  SOCINF_REQUIRE(std::abs(total - 1.0) <= 1e-6, "distribution is not normalized");
  const double u = rng.uniform() * total;
  double acc = 0.0;
  int last = 0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] <= 0.0) continue;
    acc += dist[i];
    last = static_cast<int>(i);
    if (u < acc) return last;
  }
  return last;
}

int sample(const Vec& dist, Rng& rng) {
  return sample(std::span<const double>(dist.data(), static_cast<std::size_t>(dist.size())), rng);
}

std::vector<double> discounted_returns(std::span<const double> rewards, double gamma,
                                       double bootstrap) {
  SOCINF_REQUIRE(gamma >= 0.0 && gamma <= 1.0, "discount must lie in [0, 1]");
  std::vector<double> out(rewards.size());
  double acc = bootstrap;
  for (std::size_t i = rewards.size(); i-- > 0;) {
    acc = rewards[i] + gamma * acc;
    out[i] = acc;
  }
  return out;
}

double curriculum_weight(long long step, long long curriculum_steps, double beta) {
  SOCINF_REQUIRE(curriculum_steps >= 1, "curriculum length must be >= 1");
  SOCINF_REQUIRE(beta >= 0.0, "influence weight must be nonnegative");
  if (step <= 0) return 0.0;
  if (step >= curriculum_steps) return beta;
  return beta * (static_cast<double>(step) / static_cast<double>(curriculum_steps));
}

SegmentTargets compute_targets(const PolicyParams& params, const PolicySegment& segment,
                               double gamma) {
  const int T = segment.size();
  SOCINF_REQUIRE(static_cast<int>(segment.action_rewards.size()) == T,
                 "one reward per step required");
  SegmentTargets out;
  out.returns = discounted_returns(segment.action_rewards, gamma, segment.action_bootstrap);
  const bool comm = params.shape.has_comm();
  if (comm) {
    SOCINF_REQUIRE(static_cast<int>(segment.message_rewards.size()) == T,
                   "one message reward per step required");
    out.message_returns =
        discounted_returns(segment.message_rewards, gamma, segment.message_bootstrap);
  }
  out.advantages.resize(T);
  out.message_advantages.resize(comm ? T : 0);
  RecurrentState state = segment.initial_state;
  for (int t = 0; t < T; ++t) {
    PolicyOutput o = forward(params, segment.observations[t], state);
    out.advantages[t] = out.returns[t] - o.value;
    if (comm) out.message_advantages[t] = out.message_returns[t] - *o.message_value;
    state = std::move(o.next_state);
  }
  return out;
}

LossReport& LossReport::operator+=(const LossReport& o) {
  policy += o.policy;
  value += o.value;
  entropy += o.entropy;
  message_policy += o.message_policy;
  message_value += o.message_value;
  message_entropy += o.message_entropy;
  total += o.total;
  steps += o.steps;
  return *this;
}

namespace {

struct HeadTerms {
  double policy = 0.0;
  double value = 0.0;
  double entropy = 0.0;
};

// Loss terms of one softmax head and its value head at one step; writes the
// gradient with respect to the shared hidden vector into `dh` when asked.
HeadTerms head_step(const Dense& logits_head, const Dense& value_head, const Vec& h, int choice,
                    double advantage, double target, double value_weight, double entropy_weight,
                    double scale, Dense* grad_logits, Dense* grad_value, Vec* dh) {
  const Vec logits = logits_head.forward(h);
  const Vec logp = log_softmax(logits);
  const Vec p = logp.array().exp();
  const double v = value_head.forward(h)[0];
  SOCINF_REQUIRE(choice >= 0 && choice < p.size(), "recorded choice out of range");
  HeadTerms terms;
  terms.policy = -advantage * logp[choice];
  terms.value = 0.5 * (target - v) * (target - v);
  terms.entropy = entropy(p, logp);
  if (dh != nullptr) {
    Vec dlogits = advantage * p;
    dlogits[choice] -= advantage;
    dlogits.array() += entropy_weight * p.array() * (logp.array() + terms.entropy);
    dlogits *= scale;
    Vec dv(1);
    dv[0] = scale * value_weight * (v - target);
    *dh += logits_head.backward(h, dlogits, *grad_logits);
    *dh += value_head.backward(h, dv, *grad_value);
  }
  return terms;
}

}  // namespace

LossReport actor_critic_loss(const PolicyParams& params, const PolicySegment& segment,
                             const SegmentTargets& targets, const LossWeights& weights,
                             PolicyParams* grad) {
  const PolicyShape& shape = params.shape;
  const int T = segment.size();
  const bool comm = shape.has_comm();
  SOCINF_REQUIRE(static_cast<int>(segment.actions.size()) == T, "one action per step required");
  SOCINF_REQUIRE(static_cast<int>(targets.returns.size()) == T &&
                     static_cast<int>(targets.advantages.size()) == T,
                 "targets do not match the segment");
  if (comm) {
    SOCINF_REQUIRE(static_cast<int>(segment.messages.size()) == T, "one message per step required");
    SOCINF_REQUIRE(static_cast<int>(targets.message_returns.size()) == T &&
                       static_cast<int>(targets.message_advantages.size()) == T,
                   "message targets do not match the segment");
  }
  if (grad != nullptr) SOCINF_REQUIRE(grad->shape == shape, "gradient shape mismatch");

  std::vector<EncoderCache> enc(grad != nullptr ? T : 0);
  std::vector<Gru::Cache> cells(grad != nullptr ? T : 0);
  std::vector<Vec> dh_heads(grad != nullptr ? T : 0);

  LossReport report;
  report.steps = T;
  RecurrentState state = segment.initial_state;
  for (int t = 0; t < T; ++t) {
    const Observation& obs = segment.observations[t];
    const Vec features = encode(params, obs, grad != nullptr ? &enc[t] : nullptr);
    const Vec input = recurrent_input(shape, features, obs);
    Vec h = params.gru.forward(input, state.hidden, grad != nullptr ? &cells[t] : nullptr);
    require_finite(h, "recurrent state");
    Vec* dh = nullptr;
    if (grad != nullptr) {
      dh_heads[t] = Vec::Zero(shape.hidden);
      dh = &dh_heads[t];
    }
    const HeadTerms a = head_step(params.action_head, params.value_head, h, segment.actions[t],
                                  targets.advantages[t], targets.returns[t], weights.value_weight,
                                  weights.entropy, 1.0, grad ? &grad->action_head : nullptr,
                                  grad ? &grad->value_head : nullptr, dh);
    report.policy += a.policy;
    report.value += a.value;
    report.entropy += a.entropy;
    if (comm) {
      const HeadTerms m = head_step(
          params.message_head, params.message_value_head, h, segment.messages[t],
          targets.message_advantages[t], targets.message_returns[t], weights.value_weight,
          weights.message_entropy, weights.message_weight,
          grad ? &grad->message_head : nullptr, grad ? &grad->message_value_head : nullptr, dh);
      report.message_policy += m.policy;
      report.message_value += m.value;
      report.message_entropy += m.entropy;
    }
    state.hidden = std::move(h);
  }
  report.total = report.policy + weights.value_weight * report.value -
                 weights.entropy * report.entropy +
                 weights.message_weight *
                     (report.message_policy + weights.value_weight * report.message_value -
                      weights.message_entropy * report.message_entropy);
  if (!std::isfinite(report.total)) throw NumericError("non-finite actor-critic loss");
  if (grad == nullptr) return report;

  Vec dh_next = Vec::Zero(shape.hidden);
  for (int t = T - 1; t >= 0; --t) {
    const Vec dh = dh_heads[t] + dh_next;
    Vec dx;
    dh_next = params.gru.backward(cells[t], dh, grad->gru, &dx);
    const Vec dfc2 = (enc[t].fc2.array() > 0.0).select(dx.head(shape.fc_width), 0.0);
    const Vec dh1 = params.fc2.backward(enc[t].fc1, dfc2, grad->fc2);
    const Vec dfc1 = (enc[t].fc1.array() > 0.0).select(dh1, 0.0);
    const Vec dconv = params.fc1.backward(enc[t].conv, dfc1, grad->fc1);
    params.conv.backward(segment.observations[t], enc[t].conv, dconv, grad->conv);
  }
  return report;
}

void require_finite_gradient(const TensorList& grads) {
  for (const auto& t : grads) {
    for (double v : t.values()) {
      if (!std::isfinite(v)) throw NumericError("non-finite gradient in " + t.name);
    }
  }
}

double clip_global_norm(const TensorList& grads, double max_norm) {
  const double norm = std::sqrt(squared_norm(grads));
  if (max_norm > 0.0 && norm > max_norm) scale(grads, max_norm / norm);
  return norm;
}

double annealed_learning_rate(double lr_init, double lr_end, long long step,
                              long long total_steps) {
  if (total_steps <= 0) return lr_init;
  const double f = std::clamp(static_cast<double>(step) / static_cast<double>(total_steps), 0.0, 1.0);
  return lr_init * (1.0 - f) + lr_end * f;
}

}  // namespace socinf
