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

import math
from typing import Sequence

import numpy as np

from .errors import ConfigError, InterpolationError
from .rng import RngStream
from .series import SeriesBatch, SplitPair, concat_time, split_time

# absorbs binary rounding in products such as 0.1 * 30
_RATE_TOLERANCE = 1e-9


def segment_length(segment_rate: float, length: int) -> int:
  """ceil(segment_rate * length), the number of steps a chosen segment spans."""
  if not 0 < segment_rate <= 1:
    raise ConfigError(f'Segment rate {segment_rate} must be in (0, 1].')
  return min(length, math.ceil(segment_rate * length - _RATE_TOLERANCE))


def stretch(segment: np.ndarray, length: int) -> np.ndarray:
  """Linearly interpolates a [n, C] segment onto `length` even points."""
  n = segment.shape[0]
  if n < 2:
    raise InterpolationError(
        f'A segment of {n} step(s) cannot be stretched; it needs at least 2.'
    )
  positions = np.linspace(0.0, n - 1.0, num=length)
  grid = np.arange(n, dtype=np.float64)
  return np.stack(
      [
          np.interp(positions, grid, segment[:, c])
          for c in range(segment.shape[1])
      ],
      axis=1,
  )


def upsample_series(
    x: SeriesBatch,
    segment_rate: float,
    rng: RngStream,
    keys: Sequence[int] | None = None,
) -> SeriesBatch:
  """Stretches one random segment of each series back to full length."""
  seg_len = segment_length(segment_rate, x.length)
  if seg_len < 2:
    raise InterpolationError(
        f'Segment rate {segment_rate} of T={x.length} selects {seg_len}'
        ' step(s); at least 2 are needed for interpolation.'
    )
  keys = list(range(x.batch_size)) if keys is None else list(keys)
  if len(keys) != x.batch_size:
    raise ConfigError(
        f'Got {len(keys)} substream keys for a batch of {x.batch_size}.'
    )
  out = np.empty_like(x.data)
  for b, key in enumerate(keys):
    generator = rng.substream(key).generator()
    start = int(generator.integers(0, x.length - seg_len + 1))
    out[b] = stretch(x.data[b, start : start + seg_len], x.length)
  return SeriesBatch(out, allow_empty=True)


def upsample_baseline(
    pair: SplitPair,
    segment_rate: float,
    rng: RngStream,
    keys: Sequence[int] | None = None,
) -> SplitPair:
  """Upsample augmentation on the concatenated look-back and horizon."""
  x = concat_time(pair.lookback, pair.horizon)
  return split_time(upsample_series(x, segment_rate, rng, keys), pair.t)
