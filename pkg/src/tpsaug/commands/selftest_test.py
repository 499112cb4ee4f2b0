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

from ..core.oracles import CheckResult
from ..core.testing.command_runner import CommandRunner


@pytest.fixture
def runner(mocker: MockerFixture) -> CommandRunner:
  return CommandRunner(mocker)


def test_selftest_passes(runner: CommandRunner):
  code = runner.run('selftest', '--only', 'hand-example', 'coverage')

  assert code == 0
  runner.assert_printed('All 2 checks passed')


def test_selftest_failure_exits_with_3(
    runner: CommandRunner, mocker: MockerFixture
):
  mocker.patch(
      'tpsaug.commands.selftest.run_oracles',
      return_value=[
          CheckResult('round-trip', True, 10),
          CheckResult('multiset', False, 10, 'trial 4 lost a value'),
      ],
  )

  code = runner.run('selftest', '--seed=5')

  assert code == 3
  runner.assert_printed('Running self checks with seed 5')
  runner.assert_printed("1 of 2 checks failed: ['multiset']")


def test_selftest_passes_seed_and_trials(
    runner: CommandRunner, mocker: MockerFixture
):
  run_oracles = mocker.patch(
      'tpsaug.commands.selftest.run_oracles',
      return_value=[CheckResult('ks', True, 7)],
  )

  code = runner.run('selftest', '--seed=9', '--trials=7', '--only', 'ks')

  assert code == 0
  run_oracles.assert_called_once_with(seed=9, trials=7, only=['ks'])


def test_selftest_unknown_check(runner: CommandRunner):
  code = runner.run('selftest', '--only', 'no-such-check')

  assert code == 1
  runner.assert_printed("Unknown checks ['no-such-check']")
