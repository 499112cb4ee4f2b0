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
import functools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .baselines import upsample_baseline
from .datasets import (
    AugmentedWindows,
    LabelledBatch,
    Role,
    gather_windows,
    window_count,
)
from .errors import ConfigError
from .rng import RngStream
from .series import SeriesBatch, SplitPair, concat_time, select_samples
from .tps import Level, TpsConfig, augment_pair
from .workers import iter_tasks

AUGMENT_STREAM = 0
THINNING_STREAM = 1


class Method(str, enum.Enum):
  TPS = 'tps'
  UPSAMPLE = 'upsample'


@dataclass(frozen=True)
class AugmentPlan:
  """How synthetic windows are produced and mixed into each batch.

  Attributes:
    method: TPS or the Upsample baseline.
    tps: TPS parameters; required for the tps method.
    segment_rate: kept fraction of the window for Upsample.
    seed: master seed.
    size: number of synthetic replicas per original batch.
    ratio: fraction of each replica's synthetic samples that is kept.
    batch_size: windows per original batch.
    level: keying of random substreams, per batch element or per sample.
  """

  method: Method = Method.TPS
  tps: TpsConfig | None = None
  segment_rate: float | None = None
  seed: int = 0
  size: int = 1
  ratio: float = 1.0
  batch_size: int = 32
  level: Level = Level.BATCH

  def __post_init__(self):
    object.__setattr__(self, 'method', Method(self.method))
    object.__setattr__(self, 'level', Level(self.level))
    if self.method == Method.TPS and self.tps is None:
      raise ConfigError('The tps method needs p, s and alpha.')
    if self.method == Method.UPSAMPLE and self.segment_rate is None:
      raise ConfigError('The upsample method needs a segment rate.')
    if self.size < 1:
      raise ConfigError(f'Augmentation size {self.size} must be at least 1.')
    if not 0 <= self.ratio <= 1:
      raise ConfigError(f'Augmentation ratio {self.ratio} must be in [0, 1].')
    if self.batch_size < 1:
      raise ConfigError(f'Batch size {self.batch_size} must be at least 1.')

  def kept_per_replica(self, batch: int) -> int:
    return int(math.floor(self.ratio * batch))


def synthesize(
    pair: SplitPair,
    plan: AugmentPlan,
    replica: int,
    batch_index: int,
    window_ids: Sequence[int],
) -> SplitPair:
  """One synthetic replica of `pair`.

  Batch-level plans key element b by (replica, batch_index, b); sample-level
  plans key it by (replica, window_ids[b]), so the result does not depend on how
  windows are grouped into batches.
  """
  base = RngStream(plan.seed).substream(AUGMENT_STREAM, replica)
  if plan.level == Level.BATCH:
    rng = base.substream(batch_index)
    keys = list(range(pair.batch_size))
  else:
    rng = base
    keys = [int(w) for w in window_ids]
  if plan.method == Method.UPSAMPLE:
    assert plan.segment_rate is not None
    return upsample_baseline(pair, plan.segment_rate, rng, keys)
  assert plan.tps is not None
  return augment_pair(pair, plan.tps, rng, keys)


def thin(
    pair: SplitPair, plan: AugmentPlan, replica: int, batch_index: int
) -> np.ndarray:
  """Positions of the synthetic samples kept for this replica, ascending."""
  kept = plan.kept_per_replica(pair.batch_size)
  if kept == pair.batch_size:
    return np.arange(pair.batch_size)
  rng = RngStream(plan.seed).substream(THINNING_STREAM, replica, batch_index)
  return rng.subset(pair.batch_size, kept)


@dataclass(frozen=True, eq=False)
class _BatchResult:
  original: SplitPair
  sources: np.ndarray
  synthetic: list[tuple[SplitPair, np.ndarray]]


def _augment_batch(
    split: SeriesBatch,
    t: int,
    h: int,
    stride: int,
    window_index: np.ndarray,
    batch_index: int,
    plan: AugmentPlan,
) -> _BatchResult:
  original = gather_windows(split, t, h, window_index * stride)
  synthetic = []
  for replica in range(plan.size):
    keep = thin(original, plan, replica, batch_index)
    if keep.size == 0:
      continue
    replica_pair = synthesize(
        original, plan, replica, batch_index, window_index
    )
    synthetic.append((select_samples(replica_pair, keep), window_index[keep]))
  return _BatchResult(original, window_index, synthetic)


def augment_stream(
    split: SeriesBatch,
    t: int,
    h: int,
    plan: AugmentPlan,
    stride: int = 1,
    windows: Sequence[int] | None = None,
    offset: int = 0,
    threads: int | None = None,
    progress: bool = True,
) -> Iterator[LabelledBatch]:
  """Original and synthetic windows of `split`, batch by batch.

  Each batch yields its originals first and then the kept synthetic samples of
  replica 0, 1, ... . Window ids number the emitted windows from 0.

  Args:
    split: [1, len, C] standardized split.
    t: look-back length.
    h: horizon length.
    plan: augmentation settings.
    stride: step between window starts.
    windows: indices of the windows to use, default all of them.
    offset: row of the loaded file where `split` starts.
    threads: worker pool size.
    progress: print batch progress.

  Yields:
    Labelled batches in output order.
  """
  total = window_count(split.length, t, h, stride)
  if total == 0:
    raise ConfigError(
        f'Split of length {split.length} is shorter than t + h = {t + h}.'
    )
  index = np.arange(total) if windows is None else np.asarray(windows)
  if index.size and (index.min() < 0 or index.max() >= total):
    raise ConfigError(f'Window indices must lie in [0, {total}).')

  groups = [
      index[first : first + plan.batch_size]
      for first in range(0, index.size, plan.batch_size)
  ]
  tasks = [
      functools.partial(_augment_batch, split, t, h, stride, group, i, plan)
      for i, group in enumerate(groups)
  ]
  next_id = 0
  results = iter_tasks(tasks, 'augment', threads=threads, progress=progress)
  for result in results:
    emitted = [(Role.ORIGINAL, result.original, result.sources)]
    emitted += [(Role.SYNTHETIC, p, s) for p, s in result.synthetic]
    for role, pair, sources in emitted:
      ids = np.arange(next_id, next_id + pair.batch_size)
      next_id += pair.batch_size
      yield LabelledBatch(
          pair=pair,
          role=role,
          window_ids=ids,
          sources=sources,
          offsets=offset + sources * stride,
      )


def collect(batches: Iterable[LabelledBatch]) -> AugmentedWindows:
  """Gathers a labelled stream into one in-memory record set."""
  ids, roles, sources, values = [], [], [], []
  for batch in batches:
    ids.append(batch.window_ids)
    sources.append(batch.sources)
    roles.extend([batch.role] * batch.pair.batch_size)
    values.append(concat_time(batch.pair.lookback, batch.pair.horizon).data)
  if not values:
    raise ConfigError('The augmentation stream produced no windows.')
  return AugmentedWindows(
      window_ids=np.concatenate(ids),
      roles=tuple(roles),
      sources=np.concatenate(sources),
      values=np.concatenate(values),
  )


def training_pair(batches: Iterable[LabelledBatch]) -> SplitPair:
  """Concatenates every original and synthetic batch into one training set."""
  lookbacks, horizons = [], []
  for batch in batches:
    lookbacks.append(batch.pair.lookback.data)
    horizons.append(batch.pair.horizon.data)
  if not lookbacks:
    raise ConfigError('The augmentation stream produced no windows.')
  return SplitPair(
      lookback=SeriesBatch(np.concatenate(lookbacks)),
      horizon=SeriesBatch(np.concatenate(horizons)),
  )
