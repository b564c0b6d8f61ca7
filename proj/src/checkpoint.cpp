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

#include "socinf/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "socinf/error.hpp"

namespace socinf {
namespace {

constexpr char kMagic[8] = {'S', 'I', 'N', 'F', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kMaxNameLength = 4096;
constexpr std::uint32_t kMaxDims = 8;
constexpr std::size_t kMaxElements = std::size_t{1} << 26;

void put_u32(std::ostream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw ConfigError("checkpoint is truncated");
  return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
         static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}

std::size_t element_count(const std::vector<std::uint32_t>& dims) {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

}  // namespace

const NamedTensor* Checkpoint::find(const std::string& name) const {
  for (const auto& t : tensors) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

Checkpoint snapshot(const TensorList& params) {
  Checkpoint c;
  c.tensors.reserve(params.size());
  for (const auto& p : params) {
    NamedTensor t{p.name, {static_cast<std::uint32_t>(p.rows), static_cast<std::uint32_t>(p.cols)}, {}};
    t.values.resize(p.size());
    // Eigen storage is column-major.
    for (int r = 0; r < p.rows; ++r) {
      for (int col = 0; col < p.cols; ++col) {
        t.values[static_cast<std::size_t>(r) * p.cols + col] =
            static_cast<float>(p.data[static_cast<std::size_t>(col) * p.rows + r]);
      }
    }
    c.tensors.push_back(std::move(t));
  }
  return c;
}

void restore(const Checkpoint& checkpoint, const TensorList& params) {
  std::set<std::string> claimed;
  for (const auto& p : params) {
    const NamedTensor* t = checkpoint.find(p.name);
    if (t == nullptr) throw ConfigError("checkpoint has no tensor " + p.name);
    if (t->dims.size() != 2 || t->dims[0] != static_cast<std::uint32_t>(p.rows) ||
        t->dims[1] != static_cast<std::uint32_t>(p.cols)) {
      throw ConfigError("checkpoint tensor " + p.name + " does not match the configured shape");
    }
    for (int r = 0; r < p.rows; ++r) {
      for (int col = 0; col < p.cols; ++col) {
        p.data[static_cast<std::size_t>(col) * p.rows + r] =
            t->values[static_cast<std::size_t>(r) * p.cols + col];
      }
    }
    claimed.insert(p.name);
  }
  for (const auto& t : checkpoint.tensors) {
    if (!claimed.count(t.name)) {
      throw ConfigError("checkpoint tensor " + t.name + " is not part of the configured model");
    }
  }
}

void write_checkpoint(std::ostream& out, const Checkpoint& checkpoint) {
  out.write(kMagic, sizeof kMagic);
  put_u32(out, kCheckpointVersion);
  put_u32(out, static_cast<std::uint32_t>(checkpoint.tensors.size()));
  for (const auto& t : checkpoint.tensors) {
    SOCINF_REQUIRE(t.values.size() == element_count(t.dims), "tensor " + t.name + " size mismatch");
    put_u32(out, static_cast<std::uint32_t>(t.name.size()));
    out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    put_u32(out, static_cast<std::uint32_t>(t.dims.size()));
    for (auto d : t.dims) put_u32(out, d);
    for (float v : t.values) put_u32(out, std::bit_cast<std::uint32_t>(v));
  }
}

Checkpoint read_checkpoint(std::istream& in) {
  char magic[sizeof kMagic];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw ConfigError("not a checkpoint file");
  }
  const std::uint32_t version = get_u32(in);
  if (version != kCheckpointVersion) {
    throw ConfigError("unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint c;
  const std::uint32_t count = get_u32(in);
  for (std::uint32_t i = 0; i < count; ++i) {
    NamedTensor t;
    const std::uint32_t name_length = get_u32(in);
    if (name_length > kMaxNameLength) throw ConfigError("checkpoint tensor name too long");
    t.name.resize(name_length);
    if (!in.read(t.name.data(), name_length)) throw ConfigError("checkpoint is truncated");
    const std::uint32_t ndim = get_u32(in);
    if (ndim > kMaxDims) throw ConfigError("checkpoint tensor " + t.name + " has too many dims");
    for (std::uint32_t d = 0; d < ndim; ++d) t.dims.push_back(get_u32(in));
    if (element_count(t.dims) > kMaxElements) throw ConfigError("checkpoint tensor " + t.name + " is too large");
    t.values.resize(element_count(t.dims));
    for (float& v : t.values) v = std::bit_cast<float>(get_u32(in));
    c.tensors.push_back(std::move(t));
  }
  return c;
}

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write checkpoint " + path);
  write_checkpoint(out, checkpoint);
  if (!out) throw ConfigError("failed writing checkpoint " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open checkpoint " + path);
  return read_checkpoint(in);
}

}  // namespace socinf
