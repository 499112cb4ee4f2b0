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

import json

import numpy as np
import pytest

from .errors import (
    ConfigError,
    DataError,
    DimensionError,
    EmptySampleError,
)
from .metrics import (
    Aggregation,
    MetricsReport,
    QuantileSet,
    crps,
    distribution_shift_report,
    dtw,
    dtw_batch,
    ks_statistic,
    mae,
    mse,
    pi80,
    pinball,
    point_report,
    probabilistic_report,
    wasserstein1,
)


def test_mse_and_mae():
  y = np.array([[1.0, 2.0], [3.0, 4.0]])
  y_hat = np.array([[1.0, 0.0], [3.0, 5.0]])

  assert mse(y, y_hat) == pytest.approx(5.0 / 4.0)
  assert mae(y, y_hat) == pytest.approx(3.0 / 4.0)


def test_mse_rejects_shape_mismatch():
  with pytest.raises(DimensionError):
    mse(np.zeros((2, 3)), np.zeros((2, 4)))


def test_median_pinball_is_half_mae():
  y = np.array([1.0, -2.0, 0.5])
  q = np.array([0.0, 1.0, 0.5])

  loss = pinball(y, [q], QuantileSet((0.5,)))

  assert loss == pytest.approx(0.5 * mae(y, q))


def test_pinball_penalizes_by_level():
  # under-prediction costs tau, over-prediction costs 1 - tau
  levels = QuantileSet((0.1, 0.9))
  y = np.array([1.0])

  assert pinball(y, [np.array([0.0]), np.array([0.0])], levels) == (
      pytest.approx(0.5 * (0.1 + 0.9))
  )
  assert pinball(y, [np.array([2.0]), np.array([2.0])], levels) == (
      pytest.approx(0.5 * (0.9 + 0.1))
  )


def test_crps_is_twice_pinball():
  rng = np.random.default_rng(0)
  y = rng.normal(size=(4, 3))
  q = list(np.sort(rng.normal(size=(9, 4, 3)), axis=0))

  assert crps(y, q) == 2.0 * pinball(y, q)


def test_pinball_needs_one_prediction_per_level():
  with pytest.raises(DimensionError):
    pinball(np.zeros(3), [np.zeros(3)] * 8)


def test_pi80_coverage_and_width():
  y = np.array([1.0, 2.0, 3.0])
  lower = np.array([0.0, 2.5, 3.0])
  upper = np.array([2.0, 3.0, 3.0])

  coverage, width = pi80(y, lower, upper)

  assert coverage == pytest.approx(2.0 / 3.0)
  assert width == pytest.approx(2.5 / 3.0)


@pytest.mark.parametrize(
    'levels',
    [(), (0.0, 0.5), (0.5, 0.5), (0.9, 0.1), (0.5, 1.0)],
)
def test_invalid_quantile_sets(levels):
  with pytest.raises(ConfigError):
    QuantileSet(levels)


def test_pi80_needs_both_bounds():
  with pytest.raises(ConfigError):
    QuantileSet((0.1, 0.5)).require_pi80()


def test_default_levels_bound_pi80():
  assert QuantileSet().require_pi80() == (1, 7)


def test_ks_of_disjoint_samples_is_one():
  assert ks_statistic([1.0, 2.0, 3.0], [4.0, 5.0, 6.0]) == 1.0


def test_ks_of_identical_samples_is_zero():
  assert ks_statistic([3.0, 1.0, 2.0], [1.0, 2.0, 3.0]) == 0.0


def test_ks_with_ties():
  # F_a jumps to 2/3 at 0, F_b to 1/3; largest gap is 1/3
  assert ks_statistic([0.0, 0.0, 1.0], [0.0, 1.0, 1.0]) == pytest.approx(
      1.0 / 3.0
  )


def test_wasserstein_of_shifted_sample():
  assert wasserstein1([0.0, 1.0, 3.0], [5.0, 6.0, 8.0]) == pytest.approx(5.0)


def test_wasserstein_with_unequal_sizes():
  # F^-1 of [0, 2] is 0 on (0, 1/2] and 2 after; [1] is 1 everywhere
  assert wasserstein1([0.0, 2.0], [1.0]) == pytest.approx(1.0)


def _random_sample(rng: np.random.Generator) -> np.ndarray:
  values = rng.normal(loc=rng.normal(), scale=2.0, size=rng.integers(1, 30))
  # rounding some samples produces ties
  return np.round(values) if rng.random() < 0.3 else values


def test_distances_are_symmetric():
  rng = np.random.default_rng(21)
  for _ in range(250):
    a, b = _random_sample(rng), _random_sample(rng)

    assert ks_statistic(a, b) == pytest.approx(ks_statistic(b, a), abs=1e-9)
    assert wasserstein1(a, b) == pytest.approx(wasserstein1(b, a), abs=1e-9)


def test_wasserstein_triangle_inequality():
  rng = np.random.default_rng(22)
  for _ in range(250):
    a, b, c = (_random_sample(rng) for _ in range(3))

    assert wasserstein1(a, c) <= wasserstein1(a, b) + wasserstein1(b, c) + 1e-9


@pytest.mark.parametrize('empty_first', [True, False])
def test_distances_reject_empty_samples(empty_first):
  a, b = ([], [1.0]) if empty_first else ([1.0], [])

  with pytest.raises(EmptySampleError):
    ks_statistic(a, b)
  with pytest.raises(EmptySampleError):
    wasserstein1(a, b)
  with pytest.raises(EmptySampleError):
    dtw(a, b)


@pytest.mark.parametrize(
    'a,b,expected',
    [
        ([0.0, 1.0, 2.0], [0.0, 1.0, 2.0], 0.0),
        ([0.0, 0.0, 1.0], [0.0, 1.0], 0.0),
        ([1.0, 2.0, 3.0], [2.0], 2.0),
        ([0.0, 2.0], [1.0, 1.0, 1.0], 3.0),
        ([5.0], [1.0], 4.0),
    ],
)
def test_dtw_known_values(a, b, expected):
  assert dtw(a, b) == pytest.approx(expected)


def test_dtw_is_symmetric():
  rng = np.random.default_rng(3)
  a, b = rng.normal(size=7), rng.normal(size=11)

  assert dtw(a, b) == pytest.approx(dtw(b, a))


def test_dtw_batch_matches_single_pairs():
  rng = np.random.default_rng(4)
  a, b = rng.normal(size=(5, 9)), rng.normal(size=(5, 9))

  costs = dtw_batch(a, b)

  for i in range(5):
    assert costs[i] == pytest.approx(dtw(a[i], b[i]))


def test_distribution_shift_of_identical_windows_is_zero():
  x = np.random.default_rng(5).normal(size=(4, 10, 2))

  report = distribution_shift_report(x, x.copy())

  assert report.value('avg_ks') == 0.0
  assert report.value('avg_wasserstein') == 0.0
  assert report.value('avg_dtw') == 0.0


def test_distribution_shift_averages_over_channels():
  x = np.zeros((2, 3, 2))
  s = x.copy()
  s[:, :, 1] = 1.0

  report = distribution_shift_report(x, s)

  assert report.value('avg_ks') == pytest.approx(0.5)
  assert report.value('avg_wasserstein') == pytest.approx(0.5)
  # channel 1 of each window costs 3; channel 0 costs 0
  assert report.value('avg_dtw') == pytest.approx(1.5)


def test_point_and_probabilistic_reports():
  y = np.zeros((2, 3))
  quantiles = [np.full((2, 3), q - 0.5) for q in QuantileSet().levels]

  report = point_report(y, np.ones((2, 3)))
  report.extend(probabilistic_report(y, quantiles))

  assert report.value('mse') == 1.0
  assert report.value('pi80_coverage') == 1.0
  assert report.value('pi80_width') == pytest.approx(0.8)
  assert report.value('crps') == pytest.approx(2 * report.value('pinball'))


def test_report_rejects_non_finite_values():
  with pytest.raises(DataError):
    MetricsReport().add('mse', float('nan'), Aggregation.GLOBAL)


def test_report_json_is_sorted_key_value_pairs():
  report = MetricsReport()
  report.add('mse', 0.5, Aggregation.GLOBAL)
  report.add('avg_ks', 0.25, Aggregation.PER_CHANNEL)

  payload = json.loads(report.to_json())

  assert list(payload) == ['avg_ks', 'mse']
  assert payload['avg_ks'] == {'value': 0.25, 'aggregation': 'per-channel'}
  assert report.rows()[0]['METRIC'] == 'mse'
