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

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import BoundsError, DataError, DimensionError

BATCH_AXIS = 'batch'
TIME_AXIS = 'time'
CHANNEL_AXIS = 'channel'


@dataclass(frozen=True, eq=False)
class SeriesBatch:
  """A read-only batch of multivariate series laid out as [batch, time, channel].

  Attributes:
    data: float64 values of shape [B, T, C], C varying fastest.
    raw: marks loader output that may still contain gaps; only raw batches are
      allowed to hold non-finite values.
    allow_empty: permits B == 0, used for empty synthetic batches.
  """

  data: np.ndarray
  raw: bool = field(default=False)
  allow_empty: bool = field(default=False, repr=False)

  def __post_init__(self):
    values = np.array(self.data, dtype=np.float64, order='C')
    if values.ndim != 3:
      raise DimensionError('rank', 3, values.ndim, 'SeriesBatch')
    batch, length, channels = values.shape
    if batch < 1 and not self.allow_empty:
      raise DimensionError(BATCH_AXIS, 1, batch, 'SeriesBatch (at least)')
    if length < 1:
      raise DimensionError(TIME_AXIS, 1, length, 'SeriesBatch (at least)')
    if channels < 1:
      raise DimensionError(CHANNEL_AXIS, 1, channels, 'SeriesBatch (at least)')
    if not self.raw and not np.all(np.isfinite(values)):
      b, t, c = np.argwhere(~np.isfinite(values))[0]
      raise DataError(
          f'non-finite value at batch {b}, time {t}, channel {c}', row=int(t)
      )
    values.flags.writeable = False
    object.__setattr__(self, 'data', values)

  @classmethod
  def empty(cls, length: int, channels: int) -> 'SeriesBatch':
    return cls(np.zeros((0, length, channels)), allow_empty=True)

  @property
  def batch_size(self) -> int:
    return self.data.shape[0]

  @property
  def length(self) -> int:
    return self.data.shape[1]

  @property
  def channels(self) -> int:
    return self.data.shape[2]

  @property
  def shape(self) -> tuple[int, int, int]:
    return self.data.shape  # type: ignore[return-value]


@dataclass(frozen=True, eq=False)
class SplitPair:
  """A look-back window of length t and the horizon of length h after it."""

  lookback: SeriesBatch
  horizon: SeriesBatch

  def __post_init__(self):
    _require_same(
        BATCH_AXIS,
        self.lookback.batch_size,
        self.horizon.batch_size,
        'SplitPair',
    )
    _require_same(
        CHANNEL_AXIS, self.lookback.channels, self.horizon.channels, 'SplitPair'
    )

  @property
  def t(self) -> int:
    return self.lookback.length

  @property
  def h(self) -> int:
    return self.horizon.length

  @property
  def batch_size(self) -> int:
    return self.lookback.batch_size

  @property
  def channels(self) -> int:
    return self.lookback.channels


def _require_same(axis: str, expected: int, actual: int, context: str):
  if expected != actual:
    raise DimensionError(axis, expected, actual, context)


def concat_time(lookback: SeriesBatch, horizon: SeriesBatch) -> SeriesBatch:
  """Joins look-back and horizon along time into one [B, t+h, C] batch."""
  _require_same(
      BATCH_AXIS, lookback.batch_size, horizon.batch_size, 'concat_time'
  )
  _require_same(
      CHANNEL_AXIS, lookback.channels, horizon.channels, 'concat_time'
  )
  return SeriesBatch(
      np.concatenate([lookback.data, horizon.data], axis=1),
      allow_empty=lookback.allow_empty,
  )


def split_time(x: SeriesBatch, t: int) -> SplitPair:
  """Cuts a batch at time index t into (x[:, :t], x[:, t:])."""
  if not 1 <= t < x.length:
    raise BoundsError(
        f'Split point t={t} must satisfy 1 <= t < T={x.length} so that both'
        ' look-back and horizon are non-empty.'
    )
  return SplitPair(
      lookback=SeriesBatch(x.data[:, :t, :], allow_empty=x.allow_empty),
      horizon=SeriesBatch(x.data[:, t:, :], allow_empty=x.allow_empty),
  )


def merge_batches(original: SplitPair, synthetic: SplitPair) -> SplitPair:
  """Stacks original samples first and synthetic samples after them."""
  _require_same(TIME_AXIS, original.t, synthetic.t, 'merge_batches look-back')
  _require_same(TIME_AXIS, original.h, synthetic.h, 'merge_batches horizon')
  _require_same(
      CHANNEL_AXIS, original.channels, synthetic.channels, 'merge_batches'
  )
  return SplitPair(
      lookback=SeriesBatch(
          np.concatenate([original.lookback.data, synthetic.lookback.data]),
          allow_empty=True,
      ),
      horizon=SeriesBatch(
          np.concatenate([original.horizon.data, synthetic.horizon.data]),
          allow_empty=True,
      ),
  )


def empty_like(pair: SplitPair) -> SplitPair:
  """An empty synthetic batch with the same t, h and C as `pair`."""
  return SplitPair(
      lookback=SeriesBatch.empty(pair.t, pair.channels),
      horizon=SeriesBatch.empty(pair.h, pair.channels),
  )


def select_samples(pair: SplitPair, indices: Sequence[int]) -> SplitPair:
  """Keeps the samples at `indices`, in the given order."""
  index = np.asarray(indices, dtype=np.intp)
  return SplitPair(
      lookback=SeriesBatch(pair.lookback.data[index], allow_empty=True),
      horizon=SeriesBatch(pair.horizon.data[index], allow_empty=True),
  )
