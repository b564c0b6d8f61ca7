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

#ifndef SOCINF_CHECKPOINT_HPP_
#define SOCINF_CHECKPOINT_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "socinf/nn.hpp"

namespace socinf {

// Container layout (all integers little-endian u32):
//   "SINFCKPT" | version | tensor count
//   per tensor: name length | name bytes | ndim | dims... | float32 values
// Values are stored row-major.
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct NamedTensor {
  std::string name;
  std::vector<std::uint32_t> dims;
  std::vector<float> values;

  friend bool operator==(const NamedTensor&, const NamedTensor&) = default;
};

struct Checkpoint {
  std::vector<NamedTensor> tensors;

  const NamedTensor* find(const std::string& name) const;
  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

Checkpoint snapshot(const TensorList& params);

// Copies every tensor of `params` from the checkpoint. Throws ConfigError on a
// missing tensor, a shape mismatch or a checkpoint tensor nobody claims.
void restore(const Checkpoint& checkpoint, const TensorList& params);

void write_checkpoint(std::ostream& out, const Checkpoint& checkpoint);
Checkpoint read_checkpoint(std::istream& in);

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace socinf

#endif  // SOCINF_CHECKPOINT_HPP_
