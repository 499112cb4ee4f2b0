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

from .errors import BoundsError, DataError, DimensionError
from .series import (
    SeriesBatch,
    SplitPair,
    concat_time,
    empty_like,
    merge_batches,
    select_samples,
    split_time,
)


def _batch(batch: int, length: int, channels: int) -> SeriesBatch:
  return SeriesBatch(
      np.arange(batch * length * channels, dtype=np.float64).reshape(
          batch, length, channels
      )
  )


def test_series_batch_is_read_only():
  x = _batch(2, 5, 3)

  assert x.shape == (2, 5, 3)
  with pytest.raises(ValueError):
    x.data[0, 0, 0] = 1.0


def test_series_batch_copies_input():
  values = np.zeros((1, 3, 1))
  x = SeriesBatch(values)
  values[0, 0, 0] = 9.0

  assert x.data[0, 0, 0] == 0.0


@pytest.mark.parametrize(
    'shape',
    [(0, 4, 1), (2, 0, 1), (2, 4, 0), (4, 1)],
)
def test_series_batch_rejects_bad_shapes(shape):
  with pytest.raises(DimensionError):
    SeriesBatch(np.zeros(shape))


def test_series_batch_rejects_non_finite_values():
  values = np.zeros((1, 4, 2))
  values[0, 2, 1] = np.nan

  with pytest.raises(DataError, match='batch 0, time 2, channel 1'):
    SeriesBatch(values)


def test_series_batch_raw_allows_gaps():
  values = np.zeros((1, 4, 2))
  values[0, 2, 1] = np.inf

  assert SeriesBatch(values, raw=True).shape == (1, 4, 2)


def test_concat_then_split_restores_both_parts():
  lookback, horizon = _batch(3, 5, 2), _batch(3, 2, 2)

  pair = split_time(concat_time(lookback, horizon), 5)

  assert np.array_equal(pair.lookback.data, lookback.data)
  assert np.array_equal(pair.horizon.data, horizon.data)


def test_concat_time_rejects_channel_mismatch():
  with pytest.raises(DimensionError, match='channel'):
    concat_time(_batch(2, 5, 2), _batch(2, 3, 3))


@pytest.mark.parametrize('t', [0, 7, -1])
def test_split_time_rejects_empty_parts(t):
  with pytest.raises(BoundsError):
    split_time(_batch(1, 7, 1), t)


def test_split_pair_rejects_batch_mismatch():
  with pytest.raises(DimensionError, match='batch'):
    SplitPair(lookback=_batch(2, 5, 1), horizon=_batch(3, 2, 1))


def test_merge_batches_puts_originals_first():
  original = split_time(_batch(2, 6, 1), 4)
  synthetic = split_time(SeriesBatch(-np.ones((1, 6, 1))), 4)

  merged = merge_batches(original, synthetic)

  assert merged.batch_size == 3
  assert np.array_equal(merged.lookback.data[:2], original.lookback.data)
  assert np.all(merged.lookback.data[2] == -1)


def test_merge_with_empty_synthetic_keeps_originals():
  original = split_time(_batch(2, 6, 3), 4)

  merged = merge_batches(original, empty_like(original))

  assert merged.batch_size == 2
  assert merged.t == 4 and merged.h == 2 and merged.channels == 3


def test_select_samples_keeps_requested_order():
  pair = split_time(_batch(4, 3, 1), 2)

  picked = select_samples(pair, [3, 0])

  assert np.array_equal(picked.lookback.data[0], pair.lookback.data[3])
  assert np.array_equal(picked.horizon.data[1], pair.horizon.data[0])
