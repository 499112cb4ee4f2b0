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

import numpy as np
import pytest
from pytest_mock import MockerFixture

from .oracles import ORACLES, dtw_by_cells, dtw_by_enumeration, run_oracles
from .metrics import dtw


@pytest.mark.parametrize('name', [name for name, _, _ in ORACLES])
def test_oracle_check_passes(name):
  results = run_oracles(seed=0, only=[name])

  assert len(results) == 1
  assert results[0].passed, results[0].detail


def test_oracle_names_are_unique():
  names = [name for name, _, _ in ORACLES]

  assert len(names) == len(set(names))


def test_trials_override_only_touches_randomized_checks():
  results = run_oracles(seed=1, trials=2, only=['variance', 'hand-example'])

  assert [r.trials for r in results] == [1, 2]


def test_broken_selection_is_caught(mocker: MockerFixture):
  mocker.patch(
      'tpsaug.core.tps.select_lowest',
      side_effect=lambda scores, count: np.argsort(-scores, kind='stable')[
          :count
      ],
  )

  results = run_oracles(seed=0, only=['selection'])

  assert not results[0].passed
  assert 'tie case' in results[0].detail


def test_exception_in_check_is_a_failure(mocker: MockerFixture):
  mocker.patch(
      'tpsaug.core.oracles.plan_shuffle', side_effect=RuntimeError('boom')
  )

  results = run_oracles(seed=0, only=['multiset'])

  assert not results[0].passed
  assert results[0].detail == 'raised RuntimeError: boom'


def test_dtw_enumeration_agrees_on_a_known_pair():
  a, b = np.array([0.0, 2.0, 1.0]), np.array([0.0, 1.0])

  assert dtw_by_enumeration(a, b) == dtw(a, b) == 1.0


def test_dtw_recurrence_agrees_with_enumeration():
  rng = np.random.default_rng(5)
  for _ in range(50):
    a = rng.integers(0, 3, size=rng.integers(1, 6)).astype(np.float64)
    b = rng.integers(0, 3, size=rng.integers(1, 6)).astype(np.float64)

    assert dtw_by_cells(a[None], b[None])[0] == dtw_by_enumeration(a, b)


def test_biased_shuffle_is_caught(mocker: MockerFixture):
  mocker.patch(
      'tpsaug.core.tps.fisher_yates',
      side_effect=lambda n, generator: np.roll(np.arange(n), 1),
  )

  results = run_oracles(seed=0, only=['uniformity'])

  assert not results[0].passed
  assert 'chi-square' in results[0].detail
