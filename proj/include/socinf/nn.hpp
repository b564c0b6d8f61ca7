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

#ifndef SOCINF_NN_HPP_
#define SOCINF_NN_HPP_

#include <Eigen/Core>
#include <span>
#include <string>
#include <vector>

#include "socinf/grid.hpp"
#include "socinf/rng.hpp"

namespace socinf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Named view of one parameter tensor. Matrices are column-major in memory.
struct TensorRef {
  std::string name;
  int rows = 0;
  int cols = 0;
  double* data = nullptr;

  std::size_t size() const { return static_cast<std::size_t>(rows) * cols; }
  std::span<double> values() const { return {data, size()}; }
};

using TensorList = std::vector<TensorRef>;

void append_tensor(TensorList& out, const std::string& name, Mat& m);
void append_tensor(TensorList& out, const std::string& name, Vec& v);

// Both lists must come from identically shaped parameter sets.
void require_same_layout(const TensorList& a, const TensorList& b);
double squared_norm(const TensorList& tensors);
void fill(const TensorList& tensors, double value);
void scale(const TensorList& tensors, double factor);
// y += a * x
void axpy(double a, const TensorList& x, const TensorList& y);
std::size_t parameter_count(const TensorList& tensors);
bool all_finite(const TensorList& tensors);

// Throws NumericError naming `what` if any entry is NaN or infinite.
void require_finite(const Vec& v, const char* what);

Vec softmax(const Vec& logits);
Vec log_softmax(const Vec& logits);

// Entropy of a softmax distribution given its probabilities and log-probabilities.
double entropy(const Vec& probs, const Vec& log_probs);

// y = W x + b.
struct Dense {
  Mat weight;
  Vec bias;

  static Dense zeros(int in, int out);
  int in() const { return static_cast<int>(weight.cols()); }
  int out() const { return static_cast<int>(weight.rows()); }
  void init(Rng& rng, double gain);
  Vec forward(const Vec& x) const { return weight * x + bias; }
  // Accumulates into `grad`; returns dL/dx when `want_input_grad`.
  Vec backward(const Vec& x, const Vec& dy, Dense& grad, bool want_input_grad = true) const;
  void append_to(TensorList& out, const std::string& prefix);
};

// 3x3 stride-1 valid convolution with ReLU over an egocentric window. Input
// planes are the one-hot cell kinds plus one plane marking other agents.
struct ViewConv {
  static constexpr int kInputPlanes = kNumCellKinds + 1;
  static constexpr int kTaps = 9;

  int view_size = 0;
  Mat weight;  // channels x (kInputPlanes * 9)
  Vec bias;

  static ViewConv zeros(int view_size, int channels);
  int channels() const { return static_cast<int>(weight.rows()); }
  int output_side() const { return view_size - 2; }
  int output_size() const { return output_side() * output_side() * channels(); }
  void init(Rng& rng);
  Vec forward(const Observation& obs) const;
  void backward(const Observation& obs, const Vec& output, const Vec& dout, ViewConv& grad) const;
  void append_to(TensorList& out, const std::string& prefix);
};

// Gated recurrent cell with gates stacked [update; reset; candidate]:
//   z = sig(Wx_z x + bx_z + Wh_z h + bh_z)
//   r = sig(Wx_r x + bx_r + Wh_r h + bh_r)
//   n = tanh(Wx_n x + bx_n + r * (Wh_n h + bh_n))
//   h' = (1 - z) * n + z * h
struct Gru {
  Mat wx;  // 3H x in
  Mat wh;  // 3H x H
  Vec bx;
  Vec bh;

  struct Cache {
    Vec x, h, z, r, n, hn;
  };

  static Gru zeros(int in, int hidden);
  int in() const { return static_cast<int>(wx.cols()); }
  int hidden() const { return static_cast<int>(wh.cols()); }
  void init(Rng& rng);
  Vec forward(const Vec& x, const Vec& h, Cache* cache) const;
  // Returns dL/dh for the previous state; writes dL/dx when `dx` is given.
  Vec backward(const Cache& cache, const Vec& dh_next, Gru& grad, Vec* dx) const;
  void append_to(TensorList& out, const std::string& prefix);
};

// Plain SGD with optional heavy-ball momentum.
class SgdOptimizer {
 public:
  void step(const TensorList& params, const TensorList& grads, double learning_rate,
            double momentum);

 private:
  std::vector<std::vector<double>> velocity_;
};

}  // namespace socinf

#endif  // SOCINF_NN_HPP_
