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
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError, DegenerateVarianceError, PlanMismatchError
from .patching import PatchTensor, patch_count, reconstruct, unfold
from .rng import RngStream, fisher_yates
from .series import SeriesBatch, SplitPair, concat_time, split_time


class Variant(str, enum.Enum):
  STANDARD = 'standard'
  NO_VARIANCE_ORDER = 'no-variance-order'
  NON_OVERLAPPING = 'non-overlapping'
  INPUT_ONLY = 'input-only'
  FREQUENCY_DOMAIN = 'frequency-domain'


class Level(str, enum.Enum):
  BATCH = 'batch-level'
  SAMPLE = 'sample-level'


@dataclass(frozen=True)
class TpsConfig:
  """Temporal Patch Shuffle parameters.

  Attributes:
    p: patch length in time steps.
    s: stride between patch starts; s < p gives overlapping patches.
    alpha: fraction of patches, lowest variance first, that gets permuted.
    seed: 64-bit master seed for every permutation drawn.
    variant: which ablation of the pipeline to run.
    level: whether random substreams are keyed per batch element or per sample.
  """

  p: int
  s: int
  alpha: float
  seed: int = 0
  variant: Variant = Variant.STANDARD
  level: Level = Level.BATCH

  def __post_init__(self):
    if not 0 < self.alpha <= 1:
      raise ConfigError(f'Shuffle rate alpha={self.alpha} must be in (0, 1].')
    if self.p < 1:
      raise ConfigError(f'Patch length p={self.p} must be at least 1.')
    if self.s < 1:
      raise ConfigError(f'Stride s={self.s} must be at least 1.')
    object.__setattr__(self, 'variant', Variant(self.variant))
    object.__setattr__(self, 'level', Level(self.level))

  @property
  def effective_stride(self) -> int:
    return self.p if self.variant == Variant.NON_OVERLAPPING else self.s

  def validate_for(self, length: int, channels: int) -> None:
    """Checks that this config can run on series of the given shape."""
    patch_count(length, self.p, self.effective_stride)
    if channels * self.p <= 1:
      raise ConfigError(
          f'Patch length p={self.p} with C={channels} channel(s) leaves one'
          ' value per patch; variance needs C * p > 1.'
      )

  def validate_for_window(self, t: int, h: int, channels: int) -> None:
    """Checks that this config can augment (look-back, horizon) windows."""
    if self.variant == Variant.INPUT_ONLY:
      self.validate_for(t, channels)
    elif self.variant == Variant.FREQUENCY_DOMAIN:
      self.validate_for((t + h) // 2 + 1, 2 * channels)
    else:
      self.validate_for(t + h, channels)


@dataclass(frozen=True, eq=False)
class PatchScores:
  """Per-patch sample variance, shape [B, N_p]."""

  values: np.ndarray

  @property
  def num_patches(self) -> int:
    return self.values.shape[1]


@dataclass(frozen=True, eq=False)
class ShufflePlan:
  """Which patches each batch element permutes and how.

  Attributes:
    selected: [B, N_s] patch indices; row b is I_b in selection order.
    permutations: [B, N_s] bijections over range(N_s); row b is pi_b.
    num_patches: N_p of the tensor the plan was made for.
  """

  selected: np.ndarray
  permutations: np.ndarray
  num_patches: int

  @property
  def num_selected(self) -> int:
    return self.selected.shape[1]

  @property
  def is_empty(self) -> bool:
    return self.num_selected == 0


def patch_variance(patches: PatchTensor) -> PatchScores:
  """Bessel-corrected variance of each patch over channels and offsets."""
  batch, n_p, channels, p = patches.data.shape
  if channels * p <= 1:
    raise DegenerateVarianceError(
        f'Patch variance is undefined for C * p = {channels * p}; use p >= 2'
        ' for univariate series.'
    )
  flat = patches.data.reshape(batch, n_p, channels * p)
  scores = flat.var(axis=2, ddof=1)
  constant = np.all(flat == flat[:, :, :1], axis=2)
  scores[constant] = 0.0
  return PatchScores(scores)


def shuffle_count(alpha: float, num_patches: int) -> int:
  """N_s = floor(alpha * N_p)."""
  return int(math.floor(alpha * num_patches))


def select_lowest(scores: np.ndarray, count: int) -> np.ndarray:
  """Indices of the `count` smallest scores; ties go to the lower index."""
  return np.argsort(scores, kind='stable')[:count]


def plan_shuffle(
    scores: PatchScores,
    alpha: float,
    rng: RngStream,
    keys: Sequence[int] | None = None,
    random_selection: bool = False,
) -> ShufflePlan:
  """Builds I_b and pi_b for every batch element.

  Args:
    scores: per-patch variance scores.
    alpha: shuffle rate in (0, 1].
    rng: parent stream; element b draws from rng.substream(keys[b]).
    keys: substream id per batch element, defaults to the element index.
    random_selection: pick I_b uniformly at random instead of lowest variance.

  Returns:
    The shuffle plan. It is empty when alpha * N_p < 1.
  """
  if not 0 < alpha <= 1:
    raise ConfigError(f'Shuffle rate alpha={alpha} must be in (0, 1].')
  batch, n_p = scores.values.shape
  keys = list(range(batch)) if keys is None else list(keys)
  if len(keys) != batch:
    raise PlanMismatchError(
        f'Got {len(keys)} substream keys for a batch of {batch}.'
    )
  n_s = shuffle_count(alpha, n_p)
  selected = np.zeros((batch, n_s), dtype=np.intp)
  permutations = np.zeros((batch, n_s), dtype=np.intp)
  if n_s == 0:
    return ShufflePlan(selected, permutations, n_p)

  for b, key in enumerate(keys):
    generator = rng.substream(key).generator()
    if random_selection:
      selected[b] = np.sort(fisher_yates(n_p, generator)[:n_s])
    else:
      selected[b] = select_lowest(scores.values[b], n_s)
    permutations[b] = fisher_yates(n_s, generator)
  return ShufflePlan(selected, permutations, n_p)


def apply_shuffle(patches: PatchTensor, plan: ShufflePlan) -> PatchTensor:
  """P_b[I_b] <- P_b[I_b][pi_b]; patches outside I_b are untouched."""
  batch, n_p = patches.data.shape[:2]
  if plan.is_empty or batch == 0:
    return patches
  if plan.num_patches != n_p:
    raise PlanMismatchError(
        f'Plan was made for {plan.num_patches} patches, tensor has {n_p}.'
    )
  if plan.selected.shape[0] != batch:
    raise PlanMismatchError(
        f'Plan covers {plan.selected.shape[0]} batch elements, tensor has'
        f' {batch}.'
    )
  if plan.selected.min() < 0 or plan.selected.max() >= n_p:
    raise PlanMismatchError(f'Plan selects patch indices outside [0, {n_p}).')
  if np.any(np.sort(plan.permutations, axis=1) != np.arange(plan.num_selected)):
    raise PlanMismatchError('Plan permutations are not bijections.')

  rows = np.arange(batch)[:, None]
  sources = np.take_along_axis(plan.selected, plan.permutations, axis=1)
  shuffled = patches.data.copy()
  shuffled[rows, plan.selected] = patches.data[rows, sources]
  return patches.with_data(shuffled)


def _shuffle_series(
    x: SeriesBatch,
    cfg: TpsConfig,
    rng: RngStream,
    keys: Sequence[int] | None,
) -> SeriesBatch:
  """Temporal patching, variance-aware shuffling and reconstruction of x."""
  if cfg.variant == Variant.FREQUENCY_DOMAIN:
    return _shuffle_spectrum(x, cfg, rng, keys)
  cfg.validate_for(x.length, x.channels)
  patches = unfold(x, cfg.p, cfg.effective_stride)
  plan = plan_shuffle(
      patch_variance(patches),
      cfg.alpha,
      rng,
      keys,
      random_selection=cfg.variant == Variant.NO_VARIANCE_ORDER,
  )
  return reconstruct(apply_shuffle(patches, plan), passthrough=x)


def _shuffle_spectrum(
    x: SeriesBatch,
    cfg: TpsConfig,
    rng: RngStream,
    keys: Sequence[int] | None,
) -> SeriesBatch:
  # real and imaginary parts become 2C channels over T // 2 + 1 bins
  spectrum = np.fft.rfft(x.data, axis=1)
  stacked = SeriesBatch(
      np.concatenate([spectrum.real, spectrum.imag], axis=2), allow_empty=True
  )
  time_cfg = TpsConfig(
      p=cfg.p, s=cfg.s, alpha=cfg.alpha, seed=cfg.seed, level=cfg.level
  )
  shuffled = _shuffle_series(stacked, time_cfg, rng, keys).data
  channels = x.channels
  recombined = shuffled[:, :, :channels] + 1j * shuffled[:, :, channels:]
  return SeriesBatch(
      np.fft.irfft(recombined, n=x.length, axis=1), allow_empty=True
  )


def _default_rng(cfg: TpsConfig, rng: RngStream | None) -> RngStream:
  return RngStream(cfg.seed) if rng is None else rng


def tps_forecasting(
    pair: SplitPair,
    cfg: TpsConfig,
    rng: RngStream | None = None,
    keys: Sequence[int] | None = None,
) -> SplitPair:
  """Temporal Patch Shuffle on look-back and horizon jointly.

  Args:
    pair: original look-back and horizon windows.
    cfg: augmentation parameters.
    rng: parent random stream, defaults to RngStream(cfg.seed).
    keys: substream id per batch element, defaults to the element index.

  Returns:
    The synthetic (look-back, horizon) pair, same shapes as `pair`.
  """
  x = concat_time(pair.lookback, pair.horizon)
  standard = TpsConfig(
      p=cfg.p, s=cfg.s, alpha=cfg.alpha, seed=cfg.seed, level=cfg.level
  )
  synthetic = _shuffle_series(x, standard, _default_rng(cfg, rng), keys)
  return split_time(synthetic, pair.t)


def tps_variant(
    pair: SplitPair,
    cfg: TpsConfig,
    rng: RngStream | None = None,
    keys: Sequence[int] | None = None,
) -> SplitPair:
  """Runs the forecasting ablation named by cfg.variant."""
  if cfg.variant == Variant.STANDARD:
    raise ConfigError('tps_variant needs a non-standard variant.')
  rng = _default_rng(cfg, rng)
  if cfg.variant == Variant.INPUT_ONLY:
    input_cfg = TpsConfig(
        p=cfg.p, s=cfg.s, alpha=cfg.alpha, seed=cfg.seed, level=cfg.level
    )
    lookback = _shuffle_series(pair.lookback, input_cfg, rng, keys)
    return SplitPair(lookback=lookback, horizon=pair.horizon)

  x = concat_time(pair.lookback, pair.horizon)
  return split_time(_shuffle_series(x, cfg, rng, keys), pair.t)


def augment_pair(
    pair: SplitPair,
    cfg: TpsConfig,
    rng: RngStream | None = None,
    keys: Sequence[int] | None = None,
) -> SplitPair:
  """Dispatches to tps_forecasting or tps_variant according to cfg.variant."""
  if cfg.variant == Variant.STANDARD:
    return tps_forecasting(pair, cfg, rng, keys)
  return tps_variant(pair, cfg, rng, keys)


def tps_classification(
    x: SeriesBatch,
    cfg: TpsConfig,
    rng: RngStream | None = None,
    sample_ids: Sequence[int] | None = None,
) -> SeriesBatch:
  """Temporal Patch Shuffle on input-only samples, one substream per sample.

  Args:
    x: [N, T, C] input sequences; there is no horizon.
    cfg: augmentation parameters with level == sample-level.
    rng: parent random stream, defaults to RngStream(cfg.seed).
    sample_ids: stable id of each sample, defaults to its position. Reordering
      samples together with their ids reorders the outputs the same way.

  Returns:
    The augmented [N, T, C] batch.
  """
  if cfg.level != Level.SAMPLE:
    raise ConfigError('Classification augmentation runs at sample-level only.')
  if cfg.variant == Variant.INPUT_ONLY:
    raise ConfigError(
        'The input-only variant needs a horizon; classification has none.'
    )
  return _shuffle_series(x, cfg, _default_rng(cfg, rng), sample_ids)
