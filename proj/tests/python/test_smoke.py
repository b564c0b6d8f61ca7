# Copyright 2026 The socinf Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import pytest

import socinf

SMALL = """
env.kind = harvest
env.layout = apples5
env.view_size = 5
env.episode_length = 20
env.harvest_respawn = 0,0.1
train.total_steps = 100
train.rollout_length = 10
log.window = 50
model.conv_channels = 2
model.fc_width = 8
model.hidden = 8
"""


def test_config_round_trip():
    cfg = socinf.Config.parse(SMALL)
    again = socinf.Config.parse(cfg.to_text())
    assert again.to_text() == cfg.to_text()
    assert cfg.n_agents == 1
    assert "train.lr_init" in socinf.config_keys()


def test_config_errors_map_to_value_error():
    with pytest.raises(socinf.ConfigError):
        socinf.Config.parse("train.nonsense = 1\n")
    with pytest.raises(ValueError):
        socinf.Config.parse("env.kind = orchard\n")


def test_env_steps_and_collects_apples():
    env = socinf.Env(socinf.Config.parse(SMALL), 3)
    assert env.n_agents == 1
    total = 0.0
    done = False
    while not done:
        rewards, done, events = env.step([1])
        total += rewards[0]
    assert env.tick == 20
    assert total >= 0.0
    assert len(env.render().splitlines()) == 5


def test_train_evaluate_and_metrics(tmp_path):
    cfg = socinf.Config.parse(SMALL)
    result = socinf.train(cfg, 1, str(tmp_path))
    assert result["steps"] == 100
    assert len(result["metrics"]) == 2
    recomputed = socinf.metrics_from_log(str(tmp_path))
    for a, b in zip(result["metrics"], recomputed):
        for key, value in a.items():
            other = b[key]
            assert (math.isnan(value) and math.isnan(other)) or value == other
    episodes = socinf.evaluate(str(tmp_path / "checkpoint.bin"), cfg, 4, 2)
    assert len(episodes) == 4
    assert all(len(e["returns"]) == 1 for e in episodes)


def test_metric_helpers():
    assert socinf.gini([1.0, 0.0, 0.0, 0.0]) == pytest.approx(0.75)
    assert math.isnan(socinf.gini([0.0, 0.0]))
    assert socinf.mutual_information([[5, 0], [0, 5]]) == pytest.approx(math.log(2))
    assert socinf.spearman([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)
    assert socinf.curriculum_weight(50, 100, 2.0) == pytest.approx(1.0)
