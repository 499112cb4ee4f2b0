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

import itertools
import math
import os
import tempfile
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import stats

from .datasets import (
    ChannelStats,
    LabelledBatch,
    Role,
    destandardize,
    read_augmented,
    standardize,
    window_batches,
    window_count,
    write_augmented,
)
from .metrics import (
    QuantileSet,
    crps,
    dtw,
    dtw_batch,
    ks_statistic,
    mae,
    pi80,
    pinball,
    wasserstein1,
)
from .patching import PatchTensor, coverage, patch_count, reconstruct, unfold
from .pipeline import AugmentPlan, augment_stream, collect
from .rng import RngStream
from .series import SeriesBatch, concat_time, split_time
from .tps import (
    Level,
    PatchScores,
    TpsConfig,
    Variant,
    apply_shuffle,
    patch_variance,
    plan_shuffle,
    shuffle_count,
    tps_classification,
    tps_forecasting,
    tps_variant,
)

Generator = np.random.Generator

_STEPS = ((1, 0), (0, 1), (1, 1))
_DTW_CHUNK = 81


@dataclass(frozen=True)
class CheckResult:
  name: str
  passed: bool
  trials: int
  detail: str = ''


def _scaled_error(actual: np.ndarray, expected: np.ndarray) -> float:
  scale = max(1.0, float(np.max(np.abs(expected))) if expected.size else 1.0)
  if actual.size == 0:
    return 0.0
  return float(np.max(np.abs(actual - expected))) / scale


def _result(
    name: str, trials: int, worst: float, tolerance: float
) -> CheckResult:
  detail = f'max error {worst:.3e} (tol {tolerance:.0e})'
  return CheckResult(name, worst <= tolerance, trials, detail)


def _random_series(
    gen: Generator, batch: int, length: int, channels: int
) -> SeriesBatch:
  scale = gen.uniform(0.5, 50)
  return SeriesBatch(gen.normal(size=(batch, length, channels)) * scale)


def check_round_trip(gen: Generator, trials: int = 200) -> CheckResult:
  """reconstruct(unfold(x)) == x on fully covered geometries."""
  worst = 0.0
  for _ in range(trials):
    p = int(gen.integers(1, 33))
    s = int(gen.integers(1, p + 1))
    m = int(gen.integers(0, (128 - p) // s + 1))
    length = p + s * m
    x = _random_series(
        gen, int(gen.integers(1, 5)), length, int(gen.integers(1, 9))
    )
    y = reconstruct(unfold(x, p, s))
    worst = max(worst, _scaled_error(y.data, x.data))
  return _result('round-trip identity', trials, worst, 1e-12)


def check_hand_example(gen: Generator, trials: int = 1) -> CheckResult:
  """T=4, p=2, s=1, middle patch replaced by [10, 11]."""
  del gen, trials
  x = SeriesBatch(np.arange(4.0).reshape(1, 4, 1))
  patches = unfold(x, 2, 1)
  data = patches.data.copy()
  data[0, 1, 0, :] = [10.0, 11.0]
  y = reconstruct(patches.with_data(data)).data[0, :, 0]
  worst = float(np.max(np.abs(y - np.array([0.0, 5.5, 6.5, 3.0]))))
  return _result('hand reconstruction example', 1, worst, 1e-12)


def check_coverage(gen: Generator, trials: int = 0) -> CheckResult:
  """Coverage counts against direct per-patch accumulation, T <= 64, s <= 16."""
  del gen, trials
  cases = 0
  for length in range(1, 65):
    for p in range(1, length + 1):
      for s in range(1, 17):
        expected = np.zeros(length, dtype=np.int64)
        for i in range(patch_count(length, p, s)):
          expected[i * s : i * s + p] += 1
        cases += 1
        if not np.array_equal(coverage(length, p, s).counts, expected):
          return CheckResult(
              'coverage counts', False, cases, f'T={length} p={p} s={s}'
          )
  return CheckResult('coverage counts', True, cases, 'exhaustive')


def check_degeneracy(gen: Generator, trials: int = 100) -> CheckResult:
  """alpha * N_p < 2 leaves tps_forecasting an identity."""
  worst = 0.0
  for _ in range(trials):
    length = int(gen.integers(2, 97))
    channels = int(gen.integers(1, 5))
    p = int(gen.integers(2 if channels == 1 else 1, length + 1))
    s = int(gen.integers(1, p + 1))
    n_p = patch_count(length, p, s)
    alpha = float(gen.uniform(1e-6, min(1.0, 1.999 / n_p)))
    assert shuffle_count(alpha, n_p) <= 1
    x = _random_series(gen, int(gen.integers(1, 5)), length, channels)
    pair = split_time(x, int(gen.integers(1, length)))
    out = tps_forecasting(pair, TpsConfig(p, s, alpha), RngStream(7))
    y = concat_time(out.lookback, out.horizon)
    worst = max(worst, _scaled_error(y.data, x.data))
  name = 'identity when at most one patch is selected'
  return _result(name, trials, worst, 1e-12)


def _sorted_rows(patches: np.ndarray) -> list[bytes]:
  return sorted(row.tobytes() for row in patches.reshape(patches.shape[0], -1))


def check_multiset(gen: Generator, trials: int = 200) -> CheckResult:
  """apply_shuffle keeps each element's patches, bit for bit."""
  for trial in range(trials):
    batch = int(gen.integers(1, 5))
    n_p = int(gen.integers(1, 24))
    patches = PatchTensor(
        gen.normal(size=(batch, n_p, int(gen.integers(1, 4)), 3)),
        p=3,
        s=1,
        length=n_p + 2,
    )
    plan = plan_shuffle(
        PatchScores(gen.normal(size=(batch, n_p))),
        float(gen.uniform(0.01, 1.0)),
        RngStream(trial),
        random_selection=bool(gen.integers(0, 2)),
    )
    shuffled = apply_shuffle(patches, plan)
    for b in range(batch):
      if _sorted_rows(shuffled.data[b]) != _sorted_rows(patches.data[b]):
        return CheckResult(
            'patch multiset preserved', False, trial + 1, f'b={b}'
        )
  return CheckResult('patch multiset preserved', True, trials, 'bit-exact')


def check_variance(gen: Generator, trials: int = 1000) -> CheckResult:
  """patch_variance against a two-pass sum over C * p values."""
  worst = 0.0
  for _ in range(trials):
    channels, p = int(gen.integers(1, 5)), int(gen.integers(2, 9))
    values = gen.normal(size=(1, 1, channels, p)) * gen.uniform(0.1, 100)
    flat = values.ravel()
    mean = sum(flat) / flat.size
    expected = sum((v - mean) ** 2 for v in flat) / (flat.size - 1)
    scores = patch_variance(PatchTensor(values, p=p, s=1, length=p))
    error = abs(scores.values[0, 0] - expected) / max(abs(expected), 1e-300)
    worst = max(worst, float(error))
  return _result('patch variance', trials, worst, 1e-12)


def _stable_lowest(scores: np.ndarray, count: int) -> list[int]:
  return sorted(range(scores.size), key=lambda i: (scores[i], i))[:count]


def check_selection(gen: Generator, trials: int = 500) -> CheckResult:
  """Lowest-variance selection, ties broken toward the lower patch index."""
  name = 'lowest-variance selection'
  tie_scores = PatchScores(np.array([[3.0, 1.0, 2.0, 1.0]]))
  tie_case = plan_shuffle(tie_scores, 0.5, RngStream(0)).selected[0].tolist()
  if tie_case != [1, 3]:
    return CheckResult(name, False, 0, f'tie case gave {tie_case}')
  for trial in range(trials):
    batch, n_p = int(gen.integers(1, 5)), int(gen.integers(1, 20))
    scores = gen.integers(0, 4, size=(batch, n_p)).astype(np.float64)
    alpha = float(gen.uniform(0.05, 1.0))
    plan = plan_shuffle(PatchScores(scores), alpha, RngStream(trial))
    for b in range(batch):
      expected = _stable_lowest(scores[b], shuffle_count(alpha, n_p))
      if plan.selected[b].tolist() != expected:
        return CheckResult(
            name,
            False,
            trial + 1,
            f'scores {scores[b].tolist()} gave {plan.selected[b].tolist()}',
        )
  return CheckResult(name, True, trials + 1, 'stable-sort oracle')


def _ecdf(sample: np.ndarray, points: np.ndarray) -> np.ndarray:
  return np.array([np.count_nonzero(sample <= z) for z in points]) / sample.size


def _random_sample(gen: np.random.Generator) -> np.ndarray:
  size = int(gen.integers(1, 33))
  if gen.integers(0, 2):
    return gen.integers(0, 5, size=size).astype(np.float64)
  return gen.normal(size=size) * gen.uniform(0.1, 10)


def check_ks(gen: Generator, trials: int = 500) -> CheckResult:
  """KS statistic against the largest ECDF gap over the pooled sample."""
  worst = 0.0
  for _ in range(trials):
    a, b = _random_sample(gen), _random_sample(gen)
    points = np.union1d(a, b)
    expected = float(np.max(np.abs(_ecdf(a, points) - _ecdf(b, points))))
    worst = max(worst, abs(ks_statistic(a, b) - expected))
  return _result('KS statistic', trials, worst, 1e-9)


def _quantile(sorted_sample: np.ndarray, u: float) -> float:
  index = min(int(math.floor(u * sorted_sample.size)), sorted_sample.size - 1)
  return float(sorted_sample[index])


def check_wasserstein(gen: Generator, trials: int = 500) -> CheckResult:
  """W1 against integration of |F^-1(u) - G^-1(u)| over u in (0, 1)."""
  worst = 0.0
  for _ in range(trials):
    a, b = np.sort(_random_sample(gen)), np.sort(_random_sample(gen))
    breaks = np.union1d(
        np.arange(a.size + 1) / a.size, np.arange(b.size + 1) / b.size
    )
    expected = 0.0
    for lo, hi in zip(breaks[:-1], breaks[1:]):
      mid = 0.5 * (lo + hi)
      expected += (hi - lo) * abs(_quantile(a, mid) - _quantile(b, mid))
    worst = max(worst, abs(wasserstein1(a, b) - expected))
  return _result('Wasserstein-1 distance', trials, worst, 1e-9)


def dtw_by_enumeration(a: np.ndarray, b: np.ndarray) -> float:
  """Cheapest alignment found by walking every monotone path."""
  n, m = len(a), len(b)
  best = math.inf
  stack = [(0, 0, abs(a[0] - b[0]))]
  while stack:
    i, j, cost = stack.pop()
    if i == n - 1 and j == m - 1:
      best = min(best, cost)
      continue
    for di, dj in _STEPS:
      if i + di < n and j + dj < m:
        stack.append((i + di, j + dj, cost + abs(a[i + di] - b[j + dj])))
  return float(best)


def dtw_by_cells(a: np.ndarray, b: np.ndarray) -> np.ndarray:
  """Cell-by-cell DTW recurrence for row pairs a [P, n] and b [P, m]."""
  n, m = a.shape[1], b.shape[1]
  table = np.full((a.shape[0], n + 1, m + 1), np.inf)
  table[:, 0, 0] = 0.0
  for i in range(1, n + 1):
    for j in range(1, m + 1):
      best = np.minimum(table[:, i - 1, j], table[:, i, j - 1])
      best = np.minimum(best, table[:, i - 1, j - 1])
      table[:, i, j] = np.abs(a[:, i - 1] - b[:, j - 1]) + best
  return table[:, n, m]


def _all_sequences(length: int, alphabet: tuple[float, ...]) -> np.ndarray:
  return np.array(list(itertools.product(alphabet, repeat=length)))


def check_dtw(
    gen: Generator, trials: int = 300, max_length: int = 6
) -> CheckResult:
  """DTW against the cell-by-cell recurrence and against path enumeration.

  Every pair of sequences up to `max_length` over {0, 1, 2} goes through
  dtw_batch and the recurrence. Pairs up to length 3, plus `trials` random
  pairs up to length 6, are also checked against every monotone path.
  """
  alphabet = (0.0, 1.0, 2.0)
  worst = 0.0
  checked = 0
  for n in range(1, max_length + 1):
    first = _all_sequences(n, alphabet)
    for m in range(1, max_length + 1):
      second = _all_sequences(m, alphabet)
      for start in range(0, len(first), _DTW_CHUNK):
        block = first[start : start + _DTW_CHUNK]
        a = np.repeat(block, len(second), axis=0)
        b = np.tile(second, (len(block), 1))
        gap = np.abs(dtw_batch(a, b) - dtw_by_cells(a, b))
        worst = max(worst, float(gap.max()))
        checked += len(a)

  short = [s for n in range(1, 4) for s in _all_sequences(n, alphabet)]
  pairs = [(a, b) for a in short for b in short]
  for _ in range(trials):
    pairs.append(
        tuple(
            gen.choice(alphabet, size=int(gen.integers(1, 7))) for _ in range(2)
        )
    )
  for a, b in pairs:
    worst = max(worst, abs(dtw(a, b) - dtw_by_enumeration(a, b)))
  return _result('DTW', checked + len(pairs), worst, 1e-9)


def check_probabilistic(gen: Generator, trials: int = 200) -> CheckResult:
  """pinball(0.5) == mae / 2, crps == 2 * pinball, pi80 by counting."""
  median = QuantileSet((0.5,))
  levels = QuantileSet()
  worst = 0.0
  for _ in range(trials):
    shape = tuple(int(gen.integers(1, n)) for n in (4, 9, 4))
    y = gen.integers(-3, 4, size=shape).astype(np.float64)
    draws = gen.integers(-3, 4, size=(9,) + shape).astype(np.float64)
    q = np.sort(draws, axis=0)
    worst = max(worst, abs(pinball(y, [q[4]], median) - 0.5 * mae(y, q[4])))
    if crps(y, list(q), levels) != 2.0 * pinball(y, list(q), levels):
      return CheckResult(
          'probabilistic metrics', False, trials, 'crps != 2 * pinball'
      )
    lower, upper = q[1].ravel(), q[7].ravel()
    hits = 0
    for yi, lo, hi in zip(y.ravel(), lower, upper):
      if lo <= yi <= hi:
        hits += 1
    coverage_rate, width = pi80(y, q[1], q[7])
    worst = max(worst, abs(coverage_rate - hits / y.size))
    worst = max(worst, abs(width - float(np.mean(upper - lower))))
  return _result('probabilistic metrics', trials, worst, 1e-12)


def check_shuffle_uniformity(gen: Generator, trials: int = 6000) -> CheckResult:
  """Each selected patch lands in each selected slot with frequency 1/N_s.

  Patch i holds the constant i, so after apply_shuffle a slot's value names its
  source. Every cell of the patch-to-slot table must lie within five binomial
  standard deviations of 1/N_s, and each source row must pass a chi-square
  test. Unselected slots must keep their own patch.
  """
  n_p, p, alpha = 8, 2, 0.5
  name = 'shuffle uniformity'
  scores = np.tile(gen.permutation(n_p).astype(np.float64), (trials, 1))
  values = np.broadcast_to(
      np.arange(n_p, dtype=np.float64)[None, :, None, None],
      (trials, n_p, 1, p),
  )
  patches = PatchTensor(values, p=p, s=p, length=n_p * p)
  rng = RngStream(int(gen.integers(0, 2**32)))
  plan = plan_shuffle(PatchScores(scores), alpha, rng)
  placed = apply_shuffle(patches, plan).data[:, :, 0, 0].astype(np.intp)

  selected = plan.selected[0]
  n_s = selected.size
  untouched = np.setdiff1d(np.arange(n_p), selected)
  if np.any(placed[:, untouched] != untouched):
    return CheckResult(name, False, trials, 'an unselected slot changed')
  rank = np.full(n_p, -1)
  rank[selected] = np.arange(n_s)
  sources = rank[placed[:, selected]]
  if np.any(sources < 0):
    return CheckResult(name, False, trials, 'a slot got an unselected patch')

  # table[k, l]: how often the k-th selected patch landed in the l-th slot
  table = np.zeros((n_s, n_s), dtype=np.int64)
  slots = np.broadcast_to(np.arange(n_s), sources.shape)
  np.add.at(table, (sources, slots), 1)
  expected = 1.0 / n_s
  bound = 5.0 * math.sqrt(expected * (1.0 - expected) / trials)
  deviation = float(np.max(np.abs(table / trials - expected)))
  p_value = min(float(stats.chisquare(row).pvalue) for row in table)
  detail = (
      f'max |freq - 1/{n_s}|={deviation:.4f},'
      f' min chi-square p={p_value:.3f}'
  )
  passed = deviation <= bound and p_value > 1e-4
  return CheckResult(name, passed, trials, detail)


def check_frequency_identity(gen: Generator, trials: int = 100) -> CheckResult:
  """Frequency-domain variant with an identity plan returns its input."""
  worst = 0.0
  for _ in range(trials):
    length = int(gen.integers(4, 97))
    bins = length // 2 + 1
    p = int(gen.integers(1, bins + 1))
    s = int(gen.integers(1, p + 1))
    n_p = patch_count(bins, p, s)
    alpha = float(gen.uniform(1e-6, min(1.0, 1.999 / n_p)))
    batch, channels = int(gen.integers(1, 4)), int(gen.integers(1, 5))
    x = _random_series(gen, batch, length, channels)
    pair = split_time(x, int(gen.integers(1, length)))
    cfg = TpsConfig(p, s, alpha, variant=Variant.FREQUENCY_DOMAIN)
    out = tps_variant(pair, cfg, RngStream(3))
    y = concat_time(out.lookback, out.horizon)
    worst = max(worst, _scaled_error(y.data, x.data))
  return _result('frequency-domain identity', trials, worst, 1e-9)


def check_classification_equivariance(
    gen: np.random.Generator, trials: int = 100
) -> CheckResult:
  """Permuting samples and their ids permutes the augmented samples."""
  for trial in range(trials):
    n, length = int(gen.integers(2, 7)), int(gen.integers(4, 41))
    channels = int(gen.integers(1, 4))
    p = int(gen.integers(2, length + 1))
    cfg = TpsConfig(
        p,
        int(gen.integers(1, p + 1)),
        float(gen.uniform(0.1, 1.0)),
        seed=trial,
        level=Level.SAMPLE,
    )
    x = _random_series(gen, n, length, channels)
    ids = np.arange(n) * 3 + 11
    order = gen.permutation(n)
    direct = tps_classification(x, cfg, sample_ids=ids).data
    permuted = tps_classification(
        SeriesBatch(x.data[order]), cfg, sample_ids=ids[order]
    ).data
    if not np.array_equal(permuted, direct[order]):
      return CheckResult(
          'classification equivariance', False, trial + 1, f'trial {trial}'
      )
  return CheckResult('classification equivariance', True, trials, 'bit-exact')


def check_determinism(gen: Generator, trials: int = 3) -> CheckResult:
  """augment_stream output does not depend on reruns or the thread count."""
  for trial in range(trials):
    split = _random_series(gen, 1, int(gen.integers(60, 120)), 3)
    plan = AugmentPlan(
        tps=TpsConfig(8, 2, 0.8),
        seed=int(gen.integers(0, 2**63)),
        size=2,
        ratio=0.5,
        batch_size=int(gen.integers(1, 9)),
        level=Level.BATCH if trial % 2 == 0 else Level.SAMPLE,
    )
    runs = [
        collect(
            augment_stream(
                split, 24, 8, plan, threads=threads, progress=False
            )
        )
        for threads in (1, 1, 4, 8)
    ]
    for run in runs[1:]:
      if not (
          np.array_equal(run.values, runs[0].values)
          and np.array_equal(run.sources, runs[0].sources)
          and run.roles == runs[0].roles
      ):
        return CheckResult(
            'augmentation determinism', False, trial + 1, f'trial {trial}'
        )
  detail = 'threads 1, 4, 8'
  return CheckResult('augmentation determinism', True, trials, detail)


def check_standardization(gen: Generator, trials: int = 100) -> CheckResult:
  """destandardize(standardize(x)) == x."""
  worst = 0.0
  for _ in range(trials):
    channels = int(gen.integers(1, 6))
    x = _random_series(gen, 1, int(gen.integers(2, 200)), channels)
    values = x.data.reshape(-1, channels)
    scaled = ChannelStats(values.mean(axis=0) + 3.0, values.std(axis=0) + 0.5)
    back = destandardize(standardize(x, scaled), scaled)
    worst = max(worst, _scaled_error(back.data, x.data))
  return _result('standardization round trip', trials, worst, 1e-12)


def check_window_count(gen: Generator, trials: int = 200) -> CheckResult:
  """Number of windows == len - t - h + 1 at stride 1."""
  for trial in range(trials):
    t, h = int(gen.integers(1, 20)), int(gen.integers(1, 20))
    length = t + h + int(gen.integers(0, 60))
    split = SeriesBatch(np.zeros((1, length, 1)))
    counted = sum(
        pair.batch_size
        for pair in window_batches(split, t, h, int(gen.integers(1, 17)))
    )
    if counted != length - t - h + 1 or window_count(length, t, h) != counted:
      detail = f'len={length} t={t} h={h}'
      return CheckResult('window count', False, trial + 1, detail)
  return CheckResult('window count', True, trials, 'len - t - h + 1')


def check_csv_round_trip(gen: Generator, trials: int = 5) -> CheckResult:
  """write_augmented then read_augmented reproduces values bit for bit."""
  with tempfile.TemporaryDirectory() as directory:
    for trial in range(trials):
      batch, channels = int(gen.integers(1, 6)), int(gen.integers(1, 4))
      scale = 10.0 ** int(gen.integers(-8, 9))
      x = SeriesBatch(gen.normal(size=(batch, 12, channels)) * scale)
      labelled = LabelledBatch(
          pair=split_time(x, 7),
          role=Role.ORIGINAL,
          window_ids=np.arange(batch),
          sources=np.arange(batch),
      )
      path = os.path.join(directory, f'round_trip_{trial}.csv')
      write_augmented([labelled], path, channels)
      back = read_augmented(path)
      if not np.array_equal(back.values, x.data):
        return CheckResult('CSV round trip', False, trial + 1, path)
  return CheckResult('CSV round trip', True, trials, 'bit-exact')


Check = Callable[[np.random.Generator, int], CheckResult]

# name, check, default trials
ORACLES: list[tuple[str, Check, int]] = [
    ('round-trip', check_round_trip, 200),
    ('hand-example', check_hand_example, 1),
    ('coverage', check_coverage, 0),
    ('degeneracy', check_degeneracy, 100),
    ('multiset', check_multiset, 200),
    ('variance', check_variance, 1000),
    ('selection', check_selection, 500),
    ('ks', check_ks, 500),
    ('wasserstein', check_wasserstein, 500),
    ('dtw', check_dtw, 300),
    ('probabilistic', check_probabilistic, 200),
    ('uniformity', check_shuffle_uniformity, 6000),
    ('frequency-identity', check_frequency_identity, 100),
    ('equivariance', check_classification_equivariance, 100),
    ('determinism', check_determinism, 3),
    ('standardization', check_standardization, 100),
    ('window-count', check_window_count, 200),
    ('csv-round-trip', check_csv_round_trip, 5),
]


def run_oracles(
    seed: int = 0,
    trials: int | None = None,
    only: list[str] | None = None,
) -> list[CheckResult]:
  """Runs every oracle check with its own seeded generator.

  Args:
    seed: master seed; check i draws from substream i.
    trials: overrides the default trial count of the randomized checks.
    only: names of the checks to run, default all.

  Returns:
    One result per check, in registry order.
  """
  results = []
  for i, (name, check, default_trials) in enumerate(ORACLES):
    if only and name not in only:
      continue
    gen = RngStream(seed).substream(i).generator()
    count = default_trials if trials is None or default_trials <= 1 else trials
    try:
      results.append(check(gen, count))
    except Exception as e:  # pylint: disable=broad-exception-caught
      detail = f'raised {type(e).__name__}: {e}'
      results.append(CheckResult(name, False, 0, detail))
  return results
