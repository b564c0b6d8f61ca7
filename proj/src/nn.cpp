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

#include "socinf/nn.hpp"

#include <cmath>

#include "socinf/error.hpp"

namespace socinf {

void append_tensor(TensorList& out, const std::string& name, Mat& m) {
  out.push_back({name, static_cast<int>(m.rows()), static_cast<int>(m.cols()), m.data()});
}

void append_tensor(TensorList& out, const std::string& name, Vec& v) {
  out.push_back({name, static_cast<int>(v.size()), 1, v.data()});
}

void require_same_layout(const TensorList& a, const TensorList& b) {
  SOCINF_REQUIRE(a.size() == b.size(), "tensor lists differ in length");
  for (std::size_t i = 0; i < a.size(); ++i) {
    SOCINF_REQUIRE(a[i].rows == b[i].rows && a[i].cols == b[i].cols,
                   "tensor " + a[i].name + " differs in shape");
  }
}

double squared_norm(const TensorList& tensors) {
  double s = 0.0;
  for (const auto& t : tensors) {
    for (double v : t.values()) s += v * v;
  }
  return s;
}

void fill(const TensorList& tensors, double value) {
  for (const auto& t : tensors) {
    for (double& v : t.values()) v = value;
  }
}

void scale(const TensorList& tensors, double factor) {
  for (const auto& t : tensors) {
    for (double& v : t.values()) v *= factor;
  }
}

void axpy(double a, const TensorList& x, const TensorList& y) {
  require_same_layout(x, y);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto xs = x[i].values();
    const auto ys = y[i].values();
    for (std::size_t k = 0; k < xs.size(); ++k) ys[k] += a * xs[k];
  }
}

std::size_t parameter_count(const TensorList& tensors) {
  std::size_t n = 0;
  for (const auto& t : tensors) n += t.size();
  return n;
}

bool all_finite(const TensorList& tensors) {
  for (const auto& t : tensors) {
    for (double v : t.values()) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

void require_finite(const Vec& v, const char* what) {
  if (!v.allFinite()) throw NumericError(std::string("non-finite value in ") + what);
}

Vec softmax(const Vec& logits) {
  const Vec shifted = logits.array() - logits.maxCoeff();
  const Vec e = shifted.array().exp();
  return e / e.sum();
}

Vec log_softmax(const Vec& logits) {
  const double m = logits.maxCoeff();
  const double lse = m + std::log((logits.array() - m).exp().sum());
  return logits.array() - lse;
}

double entropy(const Vec& probs, const Vec& log_probs) {
  return -(probs.array() * log_probs.array()).sum();
}

// ---------------------------------------------------------------------------

Dense Dense::zeros(int in, int out) {
  return Dense{Mat::Zero(out, in), Vec::Zero(out)};
}

void Dense::init(Rng& rng, double gain) {
  const double sd = gain / std::sqrt(static_cast<double>(std::max(1, in())));
  for (Eigen::Index i = 0; i < weight.size(); ++i) weight.data()[i] = sd * rng.normal();
  bias.setZero();
}

Vec Dense::backward(const Vec& x, const Vec& dy, Dense& grad, bool want_input_grad) const {
  grad.weight.noalias() += dy * x.transpose();
  grad.bias += dy;
  if (!want_input_grad) return {};
  return weight.transpose() * dy;
}

void Dense::append_to(TensorList& out, const std::string& prefix) {
  append_tensor(out, prefix + ".weight", weight);
  append_tensor(out, prefix + ".bias", bias);
}

// ---------------------------------------------------------------------------

namespace {

// Per-window-cell input plane bits: cell kind index and other-agent flag.
std::vector<std::uint8_t> agent_plane(const Observation& obs) {
  std::vector<std::uint8_t> plane(obs.window.size(), 0);
  for (const auto& a : obs.visible_agents) plane[a.row * obs.view_size + a.col] = 1;
  return plane;
}

}  // namespace

ViewConv ViewConv::zeros(int view_size, int channels) {
  ViewConv c;
  c.view_size = view_size;
  c.weight = Mat::Zero(channels, kInputPlanes * kTaps);
  c.bias = Vec::Zero(channels);
  return c;
}

void ViewConv::init(Rng& rng) {
  const double sd = std::sqrt(2.0 / kTaps);
  for (Eigen::Index i = 0; i < weight.size(); ++i) weight.data()[i] = sd * rng.normal();
  bias.setConstant(0.01);
}

Vec ViewConv::forward(const Observation& obs) const {
  SOCINF_REQUIRE(obs.view_size == view_size, "observation window does not match the encoder");
  const int side = output_side();
  const int ch = channels();
  const auto agents = agent_plane(obs);
  Vec out(output_size());
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      auto acc = out.segment((y * side + x) * ch, ch);
      acc = bias;
      for (int dy = 0; dy < 3; ++dy) {
        for (int dx = 0; dx < 3; ++dx) {
          const int cell = (y + dy) * view_size + (x + dx);
          const int tap = dy * 3 + dx;
          acc += weight.col(static_cast<int>(obs.window[cell]) * kTaps + tap);
          if (agents[cell]) acc += weight.col(kNumCellKinds * kTaps + tap);
        }
      }
    }
  }
  return out.cwiseMax(0.0);
}

void ViewConv::backward(const Observation& obs, const Vec& output, const Vec& dout,
                        ViewConv& grad) const {
  const int side = output_side();
  const int ch = channels();
  const auto agents = agent_plane(obs);
  const Vec dpre = (output.array() > 0.0).select(dout, 0.0);
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const auto d = dpre.segment((y * side + x) * ch, ch);
      grad.bias += d;
      for (int dy = 0; dy < 3; ++dy) {
        for (int dx = 0; dx < 3; ++dx) {
          const int cell = (y + dy) * view_size + (x + dx);
          const int tap = dy * 3 + dx;
          grad.weight.col(static_cast<int>(obs.window[cell]) * kTaps + tap) += d;
          if (agents[cell]) grad.weight.col(kNumCellKinds * kTaps + tap) += d;
        }
      }
    }
  }
}

void ViewConv::append_to(TensorList& out, const std::string& prefix) {
  append_tensor(out, prefix + ".weight", weight);
  append_tensor(out, prefix + ".bias", bias);
}

// ---------------------------------------------------------------------------

Gru Gru::zeros(int in, int hidden) {
  return Gru{Mat::Zero(3 * hidden, in), Mat::Zero(3 * hidden, hidden), Vec::Zero(3 * hidden),
             Vec::Zero(3 * hidden)};
}

void Gru::init(Rng& rng) {
  const double sx = 1.0 / std::sqrt(static_cast<double>(std::max(1, in())));
  const double sh = 1.0 / std::sqrt(static_cast<double>(hidden()));
  for (Eigen::Index i = 0; i < wx.size(); ++i) wx.data()[i] = sx * rng.normal();
  for (Eigen::Index i = 0; i < wh.size(); ++i) wh.data()[i] = sh * rng.normal();
  bx.setZero();
  bh.setZero();
}

namespace {

Vec sigmoid(const Vec& v) { return (1.0 + (-v.array()).exp()).inverse(); }

}  // namespace

Vec Gru::forward(const Vec& x, const Vec& h, Cache* cache) const {
  const int H = hidden();
  const Vec gx = wx * x + bx;
  const Vec gh = wh * h + bh;
  const Vec z = sigmoid(gx.segment(0, H) + gh.segment(0, H));
  const Vec r = sigmoid(gx.segment(H, H) + gh.segment(H, H));
  const Vec hn = gh.segment(2 * H, H);
  const Vec n = (gx.segment(2 * H, H).array() + r.array() * hn.array()).tanh();
  Vec next = (1.0 - z.array()) * n.array() + z.array() * h.array();
  if (cache != nullptr) *cache = Cache{x, h, z, r, n, hn};
  return next;
}

Vec Gru::backward(const Cache& c, const Vec& dh_next, Gru& grad, Vec* dx) const {
  const int H = hidden();
  const Vec dn = dh_next.array() * (1.0 - c.z.array());
  const Vec dz = dh_next.array() * (c.h.array() - c.n.array());
  const Vec dn_pre = dn.array() * (1.0 - c.n.array().square());
  const Vec dr = dn_pre.array() * c.hn.array();
  Vec dgx(3 * H);
  dgx.segment(0, H) = dz.array() * c.z.array() * (1.0 - c.z.array());
  dgx.segment(H, H) = dr.array() * c.r.array() * (1.0 - c.r.array());
  dgx.segment(2 * H, H) = dn_pre;
  Vec dgh = dgx;
  dgh.segment(2 * H, H) = dn_pre.array() * c.r.array();
  grad.wx.noalias() += dgx * c.x.transpose();
  grad.bx += dgx;
  grad.wh.noalias() += dgh * c.h.transpose();
  grad.bh += dgh;
  if (dx != nullptr) *dx = wx.transpose() * dgx;
  Vec dh = dh_next.array() * c.z.array();
  dh.noalias() += wh.transpose() * dgh;
  return dh;
}

void Gru::append_to(TensorList& out, const std::string& prefix) {
  append_tensor(out, prefix + ".wx", wx);
  append_tensor(out, prefix + ".wh", wh);
  append_tensor(out, prefix + ".bx", bx);
  append_tensor(out, prefix + ".bh", bh);
}

// ---------------------------------------------------------------------------

void SgdOptimizer::step(const TensorList& params, const TensorList& grads, double learning_rate,
                        double momentum) {
  require_same_layout(params, grads);
  if (velocity_.size() != params.size()) {
    velocity_.assign(params.size(), {});
    for (std::size_t i = 0; i < params.size(); ++i) velocity_[i].assign(params[i].size(), 0.0);
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto p = params[i].values();
    const auto g = grads[i].values();
    auto& v = velocity_[i];
    for (std::size_t k = 0; k < p.size(); ++k) {
      v[k] = momentum * v[k] + g[k];
      p[k] -= learning_rate * v[k];
    }
  }
}

}  // namespace socinf
