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


#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>

#include "socinf/envs.hpp"
#include "socinf/error.hpp"
#include "socinf/harness.hpp"
#include "socinf/metrics.hpp"
#include "socinf/policy.hpp"

namespace py = pybind11;
using namespace socinf;

namespace {

double value_or_nan(const MetricValue& m) {
  return m.no_data ? std::numeric_limits<double>::quiet_NaN() : m.value;
}

py::dict row_dict(const WindowRow& r) {
  py::dict d;
  d["step"] = r.step;
  d["collective_reward"] = r.collective_reward;
  d["gini"] = value_or_nan(r.gini);
  d["r_times_eq"] = r.r_times_eq;
  d["sc"] = value_or_nan(r.sc);
  d["ic_sym_act"] = value_or_nan(r.ic_sym_act);
  d["ic_act_act"] = value_or_nan(r.ic_act_act);
  d["ic_sym_act_influential"] = value_or_nan(r.ic_sym_act_influential);
  d["rho"] = value_or_nan(r.rho);
  return d;
}

py::dict episode_dict(const EpisodeSummary& s) {
  py::dict d;
  d["episode"] = s.episode;
  d["returns"] = s.returns;
  d["influence"] = s.influence;
  d["collective_reward"] = s.collective_reward;
  d["gini"] = value_or_nan(s.gini);
  d["equality_weighted"] = s.equality_weighted;
  d["box_opened"] = s.box_opened;
  return d;
}

// Stateful environment handle for interactive use.
class Env {
 public:
  Env(const ExperimentConfig& config, std::uint64_t seed)
      : config_(config.env), state_(reset(config_, seed)) {}

  void reset_episode(std::uint64_t seed) { state_ = reset(config_, seed); }

  py::tuple step_all(const std::vector<int>& actions) {
    StepResult r = step(config_, state_, actions);
    py::list events;
    for (const Event& e : r.events) events.append(py::make_tuple(event_name(e.kind), e.agent));
    return py::make_tuple(r.rewards, r.done, events);
  }

  std::string render_ascii() const { return render(state_); }
  int agents() const { return state_.num_agents(); }
  int actions() const { return config_.action_count(); }
  long long tick() const { return state_.tick; }

 private:
  EnvConfig config_;
  GridState state_;
};

}  // namespace

PYBIND11_MODULE(_socinf, m) {
  m.doc() = "Social influence reinforcement learning core";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<ContractError>(m, "ContractError", PyExc_RuntimeError);

  py::class_<ExperimentConfig>(m, "Config")
      .def_static("parse", [](const std::string& text) { return parse_config(text); },
                  py::arg("text"))
      .def_static("load", &load_config, py::arg("path"))
      .def("to_text", [](const ExperimentConfig& c) { return to_text(c); })
      .def_property_readonly("n_agents", [](const ExperimentConfig& c) { return c.env.agent_count(); })
      .def_property_readonly("action_count",
                             [](const ExperimentConfig& c) { return c.env.action_count(); })
      .def_property_readonly("seeds", [](const ExperimentConfig& c) { return c.run.seeds; });
  m.def("config_keys", &config_keys);

  py::class_<Env>(m, "Env")
      .def(py::init<const ExperimentConfig&, std::uint64_t>(), py::arg("config"), py::arg("seed"))
      .def("reset", &Env::reset_episode, py::arg("seed"))
      .def("step", &Env::step_all, py::arg("actions"))
      .def("render", &Env::render_ascii)
      .def_property_readonly("n_agents", &Env::agents)
      .def_property_readonly("action_count", &Env::actions)
      .def_property_readonly("tick", &Env::tick);

  m.def(
      "train",
      [](const ExperimentConfig& c, std::uint64_t seed, const std::string& out_dir) {
        TrainResult r;
        {
          py::gil_scoped_release release;
          r = train(c, seed, out_dir);
        }
        py::dict d;
        d["seed"] = r.seed;
        d["steps"] = r.steps;
        d["episodes"] = r.episodes;
        d["episode_returns"] = r.episode_returns;
        py::list rows;
        for (const auto& row : r.metrics) rows.append(row_dict(row));
        d["metrics"] = rows;
        return d;
      },
      py::arg("config"), py::arg("seed"), py::arg("out_dir") = "");

  m.def(
      "evaluate",
      [](const std::string& checkpoint, const ExperimentConfig& c, int episodes, std::uint64_t seed) {
        py::list out;
        for (const auto& s : evaluate(checkpoint, c, episodes, seed)) out.append(episode_dict(s));
        return out;
      },
      py::arg("checkpoint"), py::arg("config"), py::arg("episodes"), py::arg("seed"));

  m.def(
      "metrics_from_log",
      [](const std::string& run_dir) {
        py::list out;
        for (const auto& row : metrics_from_log(run_dir)) out.append(row_dict(row));
        return out;
      },
      py::arg("run_dir"));

  m.def(
      "gini", [](const std::vector<double>& x) { return value_or_nan(gini(x)); }, py::arg("returns"));
  m.def("mutual_information", &mutual_information, py::arg("table"),
        py::arg("miller_madow") = false);
  m.def(
      "spearman",
      [](const std::vector<double>& x, const std::vector<double>& y) {
        return value_or_nan(spearman(x, y));
      },
      py::arg("x"), py::arg("y"));
  m.def("curriculum_weight", &curriculum_weight, py::arg("step"), py::arg("curriculum_steps"),
        py::arg("beta"));
}
