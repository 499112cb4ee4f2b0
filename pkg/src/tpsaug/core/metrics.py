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

import enum
import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import stats

from .errors import ConfigError, DataError, DimensionError, EmptySampleError
from .series import SeriesBatch

DEFAULT_QUANTILE_LEVELS = (0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.8, 0.9, 0.95)
PI80_LOWER = 0.1
PI80_UPPER = 0.9

ArrayLike = SeriesBatch | np.ndarray | Sequence[float]


class Aggregation(str, enum.Enum):
  GLOBAL = 'global'
  PER_CHANNEL = 'per-channel'
  PER_SAMPLE = 'per-sample'


@dataclass(frozen=True)
class QuantileSet:
  """Strictly increasing quantile levels in (0, 1)."""

  levels: tuple[float, ...] = DEFAULT_QUANTILE_LEVELS

  def __post_init__(self):
    levels = tuple(float(tau) for tau in self.levels)
    if not levels:
      raise ConfigError('A quantile set needs at least one level.')
    if any(not 0 < tau < 1 for tau in levels):
      raise ConfigError(f'Quantile levels {levels} must lie in (0, 1).')
    if any(b <= a for a, b in zip(levels, levels[1:])):
      raise ConfigError(
          f'Quantile levels {levels} must be strictly increasing.'
      )
    object.__setattr__(self, 'levels', levels)

  def index_of(self, tau: float) -> int:
    for i, level in enumerate(self.levels):
      if np.isclose(level, tau, rtol=0, atol=1e-12):
        return i
    raise ConfigError(f'Quantile level {tau} is not in {self.levels}.')

  def require_pi80(self) -> tuple[int, int]:
    """Positions of the 0.1 and 0.9 levels that bound the 80% interval."""
    return self.index_of(PI80_LOWER), self.index_of(PI80_UPPER)


@dataclass(frozen=True)
class MetricEntry:
  name: str
  value: float
  aggregation: Aggregation


@dataclass
class MetricsReport:
  """Named metric values, each stored with how it was aggregated."""

  entries: list[MetricEntry] = field(default_factory=list)

  def add(self, name: str, value: float, aggregation: Aggregation) -> None:
    if not np.isfinite(value):
      raise DataError(f'Metric {name} is not finite: {value}.')
    self.entries.append(
        MetricEntry(name, float(value), Aggregation(aggregation))
    )

  def value(self, name: str) -> float:
    for entry in self.entries:
      if entry.name == name:
        return entry.value
    raise KeyError(name)

  def extend(self, other: 'MetricsReport') -> None:
    self.entries.extend(other.entries)

  def rows(self) -> list[dict]:
    return [
        {
            'METRIC': e.name,
            'VALUE': f'{e.value:.6g}',
            'AGGREGATION': e.aggregation.value,
        }
        for e in self.entries
    ]

  def to_json(self) -> str:
    payload = {
        e.name: {'value': e.value, 'aggregation': e.aggregation.value}
        for e in self.entries
    }
    return json.dumps(payload, indent=2, sort_keys=True) + '\n'


def _values(x: ArrayLike) -> np.ndarray:
  if isinstance(x, SeriesBatch):
    return x.data
  return np.asarray(x, dtype=np.float64)


def _same_shape(target: np.ndarray, other: np.ndarray, context: str) -> None:
  if target.ndim != other.ndim:
    raise DimensionError('rank', target.ndim, other.ndim, context)
  for axis, (expected, actual) in enumerate(zip(target.shape, other.shape)):
    if expected != actual:
      raise DimensionError(f'axis {axis}', expected, actual, context)


def _non_empty(sample: ArrayLike, name: str) -> np.ndarray:
  values = _values(sample).ravel()
  if values.size == 0:
    raise EmptySampleError(f'{name} sample is empty.')
  return values


def mse(target: ArrayLike, prediction: ArrayLike) -> float:
  """Mean squared error: squared Frobenius norm of the error over B * h * C."""
  y, y_hat = _values(target), _values(prediction)
  _same_shape(y, y_hat, 'mse')
  return float(np.mean(np.square(y - y_hat)))


def mae(target: ArrayLike, prediction: ArrayLike) -> float:
  y, y_hat = _values(target), _values(prediction)
  _same_shape(y, y_hat, 'mae')
  return float(np.mean(np.abs(y - y_hat)))


def _pinball_per_level(
    target: ArrayLike,
    quantile_predictions: Sequence[ArrayLike],
    levels: QuantileSet,
) -> np.ndarray:
  if len(quantile_predictions) != len(levels.levels):
    raise DimensionError(
        'quantile', len(levels.levels), len(quantile_predictions), 'pinball'
    )
  y = _values(target)
  losses = []
  for tau, prediction in zip(levels.levels, quantile_predictions):
    q = _values(prediction)
    _same_shape(y, q, f'pinball at tau={tau}')
    check = tau * np.maximum(y - q, 0.0) + (1.0 - tau) * np.maximum(q - y, 0.0)
    losses.append(np.mean(check))
  return np.asarray(losses)


def pinball(
    target: ArrayLike,
    quantile_predictions: Sequence[ArrayLike],
    levels: QuantileSet = QuantileSet(),
) -> float:
  """Check loss averaged over all quantile levels and entries."""
  losses = _pinball_per_level(target, quantile_predictions, levels)
  return float(np.mean(losses))


def crps(
    target: ArrayLike,
    quantile_predictions: Sequence[ArrayLike],
    levels: QuantileSet = QuantileSet(),
) -> float:
  """Quantile approximation of CRPS: twice the average pinball loss."""
  return 2.0 * pinball(target, quantile_predictions, levels)


def pi80(
    target: ArrayLike, q10: ArrayLike, q90: ArrayLike
) -> tuple[float, float]:
  """Coverage and mean width of the closed [q10, q90] interval."""
  y, lower, upper = _values(target), _values(q10), _values(q90)
  _same_shape(y, lower, 'pi80 lower bound')
  _same_shape(y, upper, 'pi80 upper bound')
  covered = (lower <= y) & (y <= upper)
  return float(np.mean(covered)), float(np.mean(upper - lower))


def ks_statistic(a: ArrayLike, b: ArrayLike) -> float:
  """Largest gap between the two empirical CDFs."""
  x, y = _non_empty(a, 'First'), _non_empty(b, 'Second')
  return float(stats.ks_2samp(x, y, method='asymp').statistic)


def wasserstein1(a: ArrayLike, b: ArrayLike) -> float:
  """Area between the two empirical CDFs."""
  x, y = _non_empty(a, 'First'), _non_empty(b, 'Second')
  return float(stats.wasserstein_distance(x, y))


def dtw_batch(a: np.ndarray, b: np.ndarray) -> np.ndarray:
  """Unconstrained DTW cost for each row pair of a [P, n] and b [P, m].

  Local cost is |a_i - b_j| and steps are (1, 0), (0, 1) and (1, 1). Each DP row
  is solved in closed form: with S the running sum of the row's local costs,
  D[i, j] = S[j] + min over k <= j of (V[k] - S[k]), where V[k] is the best
  entry into column k from row i - 1.
  """
  a = np.atleast_2d(np.asarray(a, dtype=np.float64))
  b = np.atleast_2d(np.asarray(b, dtype=np.float64))
  if a.shape[1] == 0 or b.shape[1] == 0:
    raise EmptySampleError('DTW needs sequences of length at least 1.')
  if a.shape[0] != b.shape[0]:
    raise DimensionError('pair', a.shape[0], b.shape[0], 'dtw_batch')

  previous = np.cumsum(np.abs(a[:, :1] - b), axis=1)
  blocked = np.full((a.shape[0], 1), np.inf)
  for i in range(1, a.shape[1]):
    local = np.abs(a[:, i : i + 1] - b)
    diagonal = np.concatenate([blocked, previous[:, :-1]], axis=1)
    entry = local + np.minimum(previous, diagonal)
    running = np.cumsum(local, axis=1)
    previous = running + np.minimum.accumulate(entry - running, axis=1)
  return previous[:, -1]


def dtw(a: ArrayLike, b: ArrayLike) -> float:
  x, y = _non_empty(a, 'First'), _non_empty(b, 'Second')
  return float(dtw_batch(x[None, :], y[None, :])[0])


def distribution_shift_report(
    original: ArrayLike, augmented: ArrayLike
) -> MetricsReport:
  """KS and Wasserstein per channel, DTW per (sample, channel).

  Args:
    original: [B, T, C] original windows.
    augmented: [B, T, C] augmented windows, aligned with `original`.

  Returns:
    avg_ks, avg_wasserstein and avg_dtw.
  """
  x, s = _values(original), _values(augmented)
  _same_shape(x, s, 'distribution_shift_report')
  if x.ndim != 3 or x.size == 0:
    raise EmptySampleError(
        'Distribution shift needs non-empty [B, T, C] arrays.'
    )
  channels = x.shape[2]
  ks = [ks_statistic(x[:, :, c], s[:, :, c]) for c in range(channels)]
  w1 = [wasserstein1(x[:, :, c], s[:, :, c]) for c in range(channels)]
  per_series = x.shape[1]
  flat_x = x.transpose(0, 2, 1).reshape(-1, per_series)
  flat_s = s.transpose(0, 2, 1).reshape(-1, per_series)

  report = MetricsReport()
  report.add('avg_ks', float(np.mean(ks)), Aggregation.PER_CHANNEL)
  report.add('avg_wasserstein', float(np.mean(w1)), Aggregation.PER_CHANNEL)
  report.add(
      'avg_dtw',
      float(np.mean(dtw_batch(flat_x, flat_s))),
      Aggregation.PER_SAMPLE,
  )
  return report


def point_report(target: ArrayLike, prediction: ArrayLike) -> MetricsReport:
  report = MetricsReport()
  report.add('mse', mse(target, prediction), Aggregation.GLOBAL)
  report.add('mae', mae(target, prediction), Aggregation.GLOBAL)
  return report


def probabilistic_report(
    target: ArrayLike,
    quantile_predictions: Sequence[ArrayLike],
    levels: QuantileSet = QuantileSet(),
) -> MetricsReport:
  """Pinball, CRPS and the 80% interval built from the 0.1 and 0.9 levels."""
  lower, upper = levels.require_pi80()
  loss = pinball(target, quantile_predictions, levels)
  coverage, width = pi80(
      target, quantile_predictions[lower], quantile_predictions[upper]
  )
  report = MetricsReport()
  report.add('pinball', loss, Aggregation.GLOBAL)
  report.add('crps', 2.0 * loss, Aggregation.GLOBAL)
  report.add('pi80_coverage', coverage, Aggregation.GLOBAL)
  report.add('pi80_width', width, Aggregation.GLOBAL)
  return report
