"""
Copyright 2025 Google LLC

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

     https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
"""

import pytest
from pytest_mock import MockerFixture

from ..core.config import (
    DEFAULT_SEED_KEY,
    THREADS_KEY,
    InMemoryTpsConfig,
    set_config,
)
from ..core.testing.command_runner import CommandRunner


@pytest.fixture(name='config')
def _config():
  cfg = InMemoryTpsConfig()
  set_config(cfg)
  yield cfg
  set_config(InMemoryTpsConfig())


@pytest.fixture
def runner(mocker: MockerFixture) -> CommandRunner:
  return CommandRunner(mocker)


def test_config_set_normalizes_integer_values(runner, config):
  code = runner.run('config', 'set', 'default-seed', '0042')

  assert code == 0
  assert config.get(DEFAULT_SEED_KEY) == '42'
  runner.assert_printed("default-seed set to '42'")


def test_config_set_rejects_invalid_thread_count(runner, config):
  code = runner.run('config', 'set', 'threads', '0')

  assert code == 1
  assert config.get(THREADS_KEY) is None
  runner.assert_printed('Config key threads')


def test_config_set_keeps_output_dir_verbatim(runner, config):
  code = runner.run('config', 'set', 'output-dir', '~/tps-runs')

  assert code == 0
  assert config.get('output-dir') == '~/tps-runs'


def test_config_get(runner, config):
  config.set(THREADS_KEY, '6')

  code = runner.run('config', 'get', 'threads')

  assert code == 0
  runner.assert_printed('threads: 6')


def test_config_get_unset_key(runner, config):
  code = runner.run('config', 'get', 'batch-size')

  assert code == 0
  runner.assert_printed('batch-size is not set')


def test_config_unknown_key_is_rejected_by_parser(runner, config):
  code = runner.run('config', 'get', 'project')

  assert code == 1
  runner.assert_printed("invalid choice: 'project'")
