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

#include "socinf/config.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "socinf/error.hpp"
#include "socinf/trajectory.hpp"

namespace socinf {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  T v{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ConfigError("bad value '" + std::string(text) + "' for " + std::string(key));
  }
  return v;
}

double parse_real(std::string_view key, std::string_view text) {
  try {
    return parse_double(text);
  } catch (const ConfigError&) {
    throw ConfigError("bad value '" + std::string(text) + "' for " + std::string(key));
  }
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError("bad boolean '" + std::string(text) + "' for " + std::string(key));
}

std::vector<std::string_view> split_list(std::string_view text) {
  std::vector<std::string_view> out;
  if (trim(text).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto end = text.find(',', start);
    out.push_back(trim(text.substr(start, end == std::string_view::npos ? end : end - start)));
    if (end == std::string_view::npos) return out;
    start = end + 1;
  }
}

template <class T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    if constexpr (std::is_floating_point_v<T>) {
      out += format_double(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void set_layout(ExperimentConfig& c, std::string_view value, const std::string& base_dir) {
  const std::string_view builtin = builtin_layout(value);
  if (!builtin.empty()) {
    c.layout_source = std::string(value);
    c.env.layout = std::string(builtin);
    return;
  }
  std::filesystem::path p(value);
  if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
  p = std::filesystem::absolute(p).lexically_normal();
  c.layout_source = p.string();
  c.env.layout = read_file(c.layout_source);
}

struct Field {
  const char* key;
  std::function<void(ExperimentConfig&, std::string_view, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define SOCINF_INT_FIELD(KEY, MEMBER, TYPE)                                              \
  Field {                                                                                \
    KEY, [](ExperimentConfig& c, std::string_view v, const std::string&) {               \
      c.MEMBER = parse_number<TYPE>(KEY, v);                                             \
    },                                                                                   \
        [](const ExperimentConfig& c) { return std::to_string(c.MEMBER); }               \
  }
#define SOCINF_REAL_FIELD(KEY, MEMBER)                                                   \
  Field {                                                                                \
    KEY, [](ExperimentConfig& c, std::string_view v, const std::string&) {               \
      c.MEMBER = parse_real(KEY, v);                                                     \
    },                                                                                   \
        [](const ExperimentConfig& c) { return format_double(c.MEMBER); }                \
  }
#define SOCINF_BOOL_FIELD(KEY, MEMBER)                                                   \
  Field {                                                                                \
    KEY, [](ExperimentConfig& c, std::string_view v, const std::string&) {               \
      c.MEMBER = parse_bool(KEY, v);                                                     \
    },                                                                                   \
        [](const ExperimentConfig& c) { return bool_text(c.MEMBER); }                    \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"env.kind", [](ExperimentConfig& c, std::string_view v,
                      const std::string&) { c.env.kind = parse_env_kind(v); },
       [](const ExperimentConfig& c) { return std::string(to_string(c.env.kind)); }},
      {"env.layout", [](ExperimentConfig& c, std::string_view v,
                        const std::string& base) { set_layout(c, v, base); },
       [](const ExperimentConfig& c) { return c.layout_source; }},
      SOCINF_INT_FIELD("env.n_agents", env.n_agents, int),
      SOCINF_INT_FIELD("env.episode_length", env.episode_length, int),
      SOCINF_INT_FIELD("env.view_size", env.view_size, int),
      SOCINF_INT_FIELD("env.beam_length", env.beam_length, int),
      SOCINF_BOOL_FIELD("env.random_orientation", env.random_orientation),
      SOCINF_BOOL_FIELD("env.fining", env.fining),
      {"env.harvest_respawn",
       [](ExperimentConfig& c, std::string_view v, const std::string&) {
         c.env.harvest_respawn.clear();
         for (auto part : split_list(v)) c.env.harvest_respawn.push_back(parse_real("env.harvest_respawn", part));
       },
       [](const ExperimentConfig& c) { return join(c.env.harvest_respawn); }},
      SOCINF_INT_FIELD("env.harvest_radius", env.harvest_radius, int),
      SOCINF_REAL_FIELD("env.cleanup_waste_threshold", env.cleanup_waste_threshold),
      SOCINF_REAL_FIELD("env.cleanup_waste_spawn_prob", env.cleanup_waste_spawn_prob),
      SOCINF_REAL_FIELD("env.cleanup_apple_spawn_prob", env.cleanup_apple_spawn_prob),
      SOCINF_REAL_FIELD("env.cleanup_initial_waste", env.cleanup_initial_waste),
      SOCINF_INT_FIELD("model.conv_channels", model.conv_channels, int),
      SOCINF_INT_FIELD("model.fc_width", model.fc_width, int),
      SOCINF_INT_FIELD("model.hidden", model.hidden, int),
      SOCINF_INT_FIELD("train.total_steps", train.total_steps, long long),
      SOCINF_INT_FIELD("train.rollout_length", train.rollout_length, int),
      SOCINF_REAL_FIELD("train.lr_init", train.lr_init),
      SOCINF_REAL_FIELD("train.lr_end", train.lr_end),
      SOCINF_REAL_FIELD("train.momentum", train.momentum),
      SOCINF_REAL_FIELD("train.gamma", train.gamma),
      SOCINF_REAL_FIELD("train.value_weight", train.value_weight),
      SOCINF_REAL_FIELD("train.entropy", train.entropy),
      SOCINF_REAL_FIELD("train.grad_clip", train.grad_clip),
      SOCINF_INT_FIELD("train.vocab_size", train.vocab_size, int),
      SOCINF_REAL_FIELD("train.message_weight", train.message_weight),
      SOCINF_REAL_FIELD("train.message_entropy", train.message_entropy),
      {"influence.variant", [](ExperimentConfig& c, std::string_view v,
                               const std::string&) { c.influence.variant = parse_influence_variant(v); },
       [](const ExperimentConfig& c) { return std::string(to_string(c.influence.variant)); }},
      {"influence.divergence", [](ExperimentConfig& c, std::string_view v,
                                  const std::string&) { c.influence.divergence = parse_divergence(v); },
       [](const ExperimentConfig& c) { return std::string(to_string(c.influence.divergence)); }},
      {"influence.prior", [](ExperimentConfig& c, std::string_view v,
                             const std::string&) { c.influence.prior = parse_counterfactual_prior(v); },
       [](const ExperimentConfig& c) { return std::string(to_string(c.influence.prior)); }},
      SOCINF_REAL_FIELD("influence.alpha", influence.alpha),
      SOCINF_REAL_FIELD("influence.beta", influence.beta),
      SOCINF_INT_FIELD("influence.curriculum_steps", influence.curriculum_steps, long long),
      {"influence.influencers",
       [](ExperimentConfig& c, std::string_view v, const std::string&) {
         c.influence.influencers.clear();
         for (auto part : split_list(v)) c.influence.influencers.push_back(parse_number<int>("influence.influencers", part));
       },
       [](const ExperimentConfig& c) { return join(c.influence.influencers); }},
      SOCINF_BOOL_FIELD("influence.visibility_gate", influence.visibility_gate),
      SOCINF_BOOL_FIELD("influence.influencee_reward", influence.influencee_reward),
      SOCINF_REAL_FIELD("moa.loss_weight", moa.loss_weight),
      SOCINF_BOOL_FIELD("moa.visible_only", moa.visible_only),
      SOCINF_BOOL_FIELD("moa.shared_encoder", moa.shared_encoder),
      SOCINF_INT_FIELD("log.window", log.window, long long),
      SOCINF_BOOL_FIELD("log.trajectory", log.trajectory),
      SOCINF_BOOL_FIELD("log.per_pair", log.per_pair),
      SOCINF_INT_FIELD("log.ic_min_steps", log.ic_min_steps, int),
      SOCINF_BOOL_FIELD("log.miller_madow", log.miller_madow),
      {"run.seeds",
       [](ExperimentConfig& c, std::string_view v, const std::string&) {
         c.run.seeds.clear();
         for (auto part : split_list(v)) c.run.seeds.push_back(parse_number<std::uint64_t>("run.seeds", part));
       },
       [](const ExperimentConfig& c) { return join(c.run.seeds); }},
      {"run.out", [](ExperimentConfig& c, std::string_view v, const std::string&) { c.run.out = std::string(v); },
       [](const ExperimentConfig& c) { return c.run.out; }},
      SOCINF_INT_FIELD("run.workers", run.workers, int),
      SOCINF_BOOL_FIELD("run.deterministic", run.deterministic),
      SOCINF_INT_FIELD("run.eval_episodes", run.eval_episodes, int),
  };
  return table;
}

#undef SOCINF_INT_FIELD
#undef SOCINF_REAL_FIELD
#undef SOCINF_BOOL_FIELD

const Field* find_field(std::string_view key) {
  for (const auto& f : fields()) {
    if (key == f.key) return &f;
  }
  return nullptr;
}

}  // namespace

ExperimentConfig preset(EnvKind kind, InfluenceVariant variant) {
  ExperimentConfig c;
  c.env = default_env_config(kind);
  c.layout_source = std::string(to_string(kind));
  c.influence.variant = variant;
  c.influence.curriculum_steps = 100000;
  TrainConfig& t = c.train;
  InfluenceConfig& inf = c.influence;
  const bool cleanup = kind == EnvKind::kCleanup;
  switch (variant) {
    case InfluenceVariant::kNone:
      t.entropy = cleanup ? 0.00176 : 0.000687;
      t.lr_init = cleanup ? 0.00126 : 0.00136;
      t.lr_end = cleanup ? 0.000012 : 0.000028;
      break;
    case InfluenceVariant::kBasic:
      t.entropy = cleanup ? 0.000248 : 0.00025;
      t.lr_init = 0.00107;
      t.lr_end = 0.000042;
      inf.beta = cleanup ? 0.146 : 0.224;
      inf.divergence = cleanup ? Divergence::kJsd : Divergence::kPmi;
      inf.influencers = cleanup ? std::vector<int>{0} : std::vector<int>{0, 1, 2};
      break;
    case InfluenceVariant::kComm:
      t.entropy = cleanup ? 0.00305 : 0.00220;
      t.lr_init = cleanup ? 0.00249 : 0.000413;
      t.lr_end = cleanup ? 0.0000127 : 0.000049;
      t.vocab_size = cleanup ? 9 : 7;
      t.message_entropy = cleanup ? 0.000789 : 0.00208;
      t.message_weight = cleanup ? 0.0758 : 0.0709;
      inf.beta = cleanup ? 2.752 : 4.825;
      inf.alpha = cleanup ? 0.0 : 1.0;
      break;
    case InfluenceVariant::kMoa:
      t.entropy = cleanup ? 0.00176 : 0.00223;
      t.lr_init = cleanup ? 0.00123 : 0.00120;
      t.lr_end = cleanup ? 0.000012 : 0.000044;
      inf.beta = cleanup ? 0.620 : 2.521;
      c.moa.loss_weight = cleanup ? 15.007 : 10.911;
      c.moa.visible_only = true;
      break;
  }
  if (kind == EnvKind::kBoxTrapped) {
    c.env.episode_length = 50;
    t.lr_init = 0.016;
    t.lr_end = 0.0005;
    t.grad_clip = 10.0;
    if (variant == InfluenceVariant::kBasic) inf.influencers = {0};
  }
  return c;
}

void ExperimentConfig::validate() const {
  env.validate();
  const int n = env.agent_count();
  if (model.conv_channels < 1 || model.fc_width < 1 || model.hidden < 1) {
    throw ConfigError("model widths must be positive");
  }
  if (train.total_steps < 0) throw ConfigError("train.total_steps must be nonnegative");
  if (train.rollout_length < 1) throw ConfigError("train.rollout_length must be at least 1");
  if (!(train.lr_init >= 0.0) || !(train.lr_end >= 0.0)) {
    throw ConfigError("learning rates must be nonnegative");
  }
  if (!(train.gamma >= 0.0 && train.gamma <= 1.0)) throw ConfigError("train.gamma must lie in [0, 1]");
  if (!(train.momentum >= 0.0 && train.momentum < 1.0)) {
    throw ConfigError("train.momentum must lie in [0, 1)");
  }
  if (train.value_weight < 0.0 || train.entropy < 0.0 || train.message_weight < 0.0 ||
      train.message_entropy < 0.0) {
    throw ConfigError("loss weights must be nonnegative");
  }
  const bool comm = influence.variant == InfluenceVariant::kComm;
  if (comm && train.vocab_size < 2) throw ConfigError("communication needs train.vocab_size >= 2");
  if (!comm && train.vocab_size != 0) {
    throw ConfigError("train.vocab_size is only used by the comm variant");
  }
  influence.validate(n);
  if (n > 64) throw ConfigError("at most 64 agents are supported");
  if (moa.loss_weight < 0.0) throw ConfigError("moa.loss_weight must be nonnegative");
  if (log.window < 1) throw ConfigError("log.window must be at least 1");
  if (log.ic_min_steps < 1) throw ConfigError("log.ic_min_steps must be at least 1");
  if (run.seeds.empty()) throw ConfigError("run.seeds must list at least one seed");
  if (run.workers < 1) throw ConfigError("run.workers must be at least 1");
  if (run.deterministic && run.workers != 1) {
    throw ConfigError("deterministic runs use a single worker");
  }
  if (run.eval_episodes < 0) throw ConfigError("run.eval_episodes must be nonnegative");
}

ExperimentConfig parse_config(std::string_view text, const std::string& base_dir) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::size_t start = 0;
  int line_no = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find('\n', start), text.size());
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (find_field(key) == nullptr) throw ConfigError("unknown config key '" + key + "'");
    for (const auto& e : entries) {
      if (e.first == key) throw ConfigError("duplicate config key '" + key + "'");
    }
    entries.emplace_back(key, value);
  }
  auto lookup = [&](const char* key, const char* fallback) {
    for (const auto& e : entries) {
      if (e.first == key) return e.second;
    }
    return std::string(fallback);
  };
  ExperimentConfig c = preset(parse_env_kind(lookup("env.kind", "harvest")),
                              parse_influence_variant(lookup("influence.variant", "none")));
  for (const auto& [key, value] : entries) find_field(key)->set(c, value, base_dir);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  const std::filesystem::path p(path);
  return parse_config(read_file(path), p.has_parent_path() ? p.parent_path().string() : ".");
}

std::string to_text(const ExperimentConfig& config) {
  std::string out;
  for (const auto& f : fields()) {
    out += f.key;
    out += " = ";
    out += f.get(config);
    out += '\n';
  }
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& f : fields()) keys.emplace_back(f.key);
  return keys;
}

}  // namespace socinf
