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

import dataclasses
import functools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..utils.console import tps_print
from .datasets import gather_windows, window_starts
from .errors import ConfigError, TpsError
from .pipeline import AugmentPlan, augment_stream, training_pair
from .scorer import Scorer
from .series import SeriesBatch, SplitPair
from .tps import TpsConfig, Variant
from .workers import run_tasks

P_CANDIDATES = (
    16, 32, 48, 64, 72, 96, 120, 168, 192, 200, 220,
    240, 280, 300, 340, 380, 400, 420, 440, 560, 700,
)  # fmt: skip
S_CANDIDATES = (1, 2, 5, 8, 12, 16, 24, 32, 36, 96)
ALPHA_CANDIDATES = (0.2, 0.5, 0.7, 0.8, 0.9, 1.0)

# Twenty tuples spread over the candidate lists, short patches first.
DEFAULT_GRID: tuple[tuple[int, int, float], ...] = (
    (16, 1, 0.5),
    (16, 2, 0.7),
    (16, 5, 1.0),
    (32, 2, 0.5),
    (32, 5, 0.7),
    (32, 5, 1.0),
    (32, 8, 0.8),
    (48, 5, 0.9),
    (48, 12, 1.0),
    (64, 8, 0.5),
    (64, 16, 0.8),
    (64, 24, 1.0),
    (72, 12, 0.7),
    (96, 16, 0.9),
    (96, 24, 1.0),
    (96, 32, 0.5),
    (120, 24, 0.8),
    (168, 36, 1.0),
    (192, 32, 0.9),
    (200, 96, 0.2),
)


@dataclass(frozen=True)
class Candidate:
  p: int
  s: int
  alpha: float

  def label(self) -> str:
    return f'({self.p}, {self.s}, {self.alpha:g})'


@dataclass(frozen=True)
class SweepGrid:
  """Candidate (p, s, alpha) tuples, evaluated in this order."""

  candidates: tuple[Candidate, ...]

  def __post_init__(self):
    if not self.candidates:
      raise ConfigError('The sweep grid is empty.')

  @classmethod
  def default(cls) -> 'SweepGrid':
    return cls(tuple(Candidate(*row) for row in DEFAULT_GRID))

  @classmethod
  def from_file(cls, path: str) -> 'SweepGrid':
    """Reads one `p,s,alpha` tuple per line.

    Blank lines and `#` comments are skipped.
    """
    candidates = []
    try:
      with open(path, encoding='utf-8', mode='r') as stream:
        lines = stream.read().splitlines()
    except OSError as e:
      raise ConfigError(f'Cannot read grid file {path}: {e}') from e
    for number, line in enumerate(lines, start=1):
      text = line.split('#', 1)[0].strip()
      if not text:
        continue
      parts = [part.strip() for part in text.split(',')]
      try:
        if len(parts) != 3:
          raise ValueError(f'expected 3 fields, got {len(parts)}')
        candidate = Candidate(int(parts[0]), int(parts[1]), float(parts[2]))
        candidates.append(candidate)
      except ValueError as e:
        raise ConfigError(
            f'Grid file {path}, line {number}: cannot parse {line!r} as'
            f' p,s,alpha ({e}).'
        ) from e
    return cls(tuple(candidates))


@dataclass(frozen=True)
class SweepResult:
  candidate: Candidate
  val_mse: float


def usable_candidates(
    grid: SweepGrid,
    t: int,
    h: int,
    channels: int,
    variant: Variant,
    seed: int,
) -> list[tuple[Candidate, TpsConfig]]:
  """Candidates that fit the windows; the rest are skipped with a warning."""
  usable = []
  for candidate in grid.candidates:
    try:
      cfg = TpsConfig(
          candidate.p, candidate.s, candidate.alpha, seed=seed, variant=variant
      )
      cfg.validate_for_window(t, h, channels)
    except TpsError as e:
      tps_print(f'Skipping candidate {candidate.label()}: {e}')
      continue
    usable.append((candidate, cfg))
  return usable


def _evaluate(
    train: SeriesBatch,
    train_windows: np.ndarray | None,
    val_pair: SplitPair,
    t: int,
    h: int,
    stride: int,
    plan: AugmentPlan,
    scorer: Scorer,
) -> float:
  stream = augment_stream(
      train,
      t,
      h,
      plan,
      stride=stride,
      windows=train_windows,
      threads=1,
      progress=False,
  )
  return scorer.score(training_pair(stream), val_pair)


def run_sweep(
    grid: SweepGrid,
    train: SeriesBatch,
    val: SeriesBatch,
    t: int,
    h: int,
    base_plan: AugmentPlan,
    scorer: Scorer,
    stride: int = 1,
    train_windows: Sequence[int] | None = None,
    val_windows: Sequence[int] | None = None,
    threads: int | None = None,
) -> list[SweepResult]:
  """Scores every usable candidate and ranks them by validation MSE.

  Args:
    grid: candidates in evaluation order.
    train: standardized train split.
    val: standardized validation split.
    t: look-back length.
    h: horizon length.
    base_plan: size, ratio, batch size, level, seed and variant shared by all
      candidates.
    scorer: validation scorer.
    stride: step between window starts.
    train_windows: subset of train window indices, default all.
    val_windows: subset of validation window indices, default all.
    threads: worker pool size.

  Returns:
    Results sorted by validation MSE; ties keep grid order.
  """
  if base_plan.tps is None:
    raise ConfigError('A sweep tunes TPS parameters; use the tps method.')
  usable = usable_candidates(
      grid,
      t,
      h,
      train.channels,
      base_plan.tps.variant,
      base_plan.seed,
  )
  if not usable:
    raise ConfigError('No grid candidate fits windows of length t + h.')

  val_starts = window_starts(val.length, t, h, stride)
  if val_windows is not None:
    val_starts = val_starts[np.asarray(val_windows, dtype=np.intp)]
  val_pair = gather_windows(val, t, h, val_starts)
  index = None if train_windows is None else np.asarray(train_windows)
  tasks = [
      functools.partial(
          _evaluate,
          train,
          index,
          val_pair,
          t,
          h,
          stride,
          dataclasses.replace(base_plan, tps=cfg),
          scorer,
      )
      for _, cfg in usable
  ]
  scores = run_tasks(tasks, 'sweep', batch=len(tasks), threads=threads)
  results = [
      SweepResult(candidate, float(score))
      for (candidate, _), score in zip(usable, scores)
  ]
  return sorted(results, key=lambda r: r.val_mse)


def baseline_score(
    train: SeriesBatch,
    val: SeriesBatch,
    t: int,
    h: int,
    scorer: Scorer,
    stride: int = 1,
    train_windows: Sequence[int] | None = None,
    val_windows: Sequence[int] | None = None,
) -> float:
  """Validation MSE of the scorer trained on original windows only."""
  train_starts = window_starts(train.length, t, h, stride)
  if train_windows is not None:
    train_starts = train_starts[np.asarray(train_windows, dtype=np.intp)]
  val_starts = window_starts(val.length, t, h, stride)
  if val_windows is not None:
    val_starts = val_starts[np.asarray(val_windows, dtype=np.intp)]
  return scorer.score(
      gather_windows(train, t, h, train_starts),
      gather_windows(val, t, h, val_starts),
  )
