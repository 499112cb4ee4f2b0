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

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import DimensionError, GeometryError, ReconstructionError
from .series import BATCH_AXIS, CHANNEL_AXIS, TIME_AXIS, SeriesBatch

AXES = (BATCH_AXIS, TIME_AXIS, CHANNEL_AXIS)


def patch_count(length: int, p: int, s: int) -> int:
  """Number of length-p windows with stride s that fit in `length` steps."""
  validate_geometry(length, p, s)
  return (length - p) // s + 1


def validate_geometry(length: int, p: int, s: int) -> None:
  if p < 1:
    raise GeometryError(f'Patch length p={p} must be at least 1.')
  if s < 1:
    raise GeometryError(f'Stride s={s} must be at least 1.')
  if p > length:
    raise GeometryError(
        f'Patch length p={p} exceeds the series length T={length}; no patch'
        ' fits.'
    )


@dataclass(frozen=True, eq=False)
class PatchTensor:
  """Patches of shape [B, N_p, C, p] together with the geometry that cut them.

  Attributes:
    data: float64 values; data[b, i, c, j] is step i*s + j of channel c.
    p: patch length.
    s: stride between consecutive patch starts.
    length: length T of the series the patches were cut from.
  """

  data: np.ndarray
  p: int
  s: int
  length: int

  def __post_init__(self):
    values = np.array(self.data, dtype=np.float64, order='C')
    if values.ndim != 4:
      raise DimensionError('rank', 4, values.ndim, 'PatchTensor')
    expected = patch_count(self.length, self.p, self.s)
    if values.shape[1] != expected:
      raise DimensionError('patch', expected, values.shape[1], 'PatchTensor')
    if values.shape[3] != self.p:
      raise DimensionError(
          'within-patch', self.p, values.shape[3], 'PatchTensor'
      )
    values.flags.writeable = False
    object.__setattr__(self, 'data', values)

  @property
  def num_patches(self) -> int:
    return self.data.shape[1]

  @property
  def channels(self) -> int:
    return self.data.shape[2]

  def with_data(self, data: np.ndarray) -> 'PatchTensor':
    """Same geometry, new patch contents."""
    return PatchTensor(data, p=self.p, s=self.s, length=self.length)


@dataclass(frozen=True, eq=False)
class CoverageProfile:
  """K_tau: how many patch windows cover each time index."""

  counts: np.ndarray

  @property
  def uncovered(self) -> np.ndarray:
    return np.flatnonzero(self.counts == 0)

  @property
  def fully_covered(self) -> bool:
    return bool(np.all(self.counts > 0))


def unfold(x: SeriesBatch, p: int, s: int) -> PatchTensor:
  """Cuts each series into windows x[b, i*s : i*s+p, :] transposed to [C, p]."""
  n_p = patch_count(x.length, p, s)
  windows = sliding_window_view(x.data, p, axis=1)[:, ::s]
  return PatchTensor(windows[:, :n_p], p=p, s=s, length=x.length)


def coverage(length: int, p: int, s: int) -> CoverageProfile:
  n_p = patch_count(length, p, s)
  delta = np.zeros(length + 1, dtype=np.int64)
  starts = np.arange(n_p) * s
  np.add.at(delta, starts, 1)
  np.add.at(delta, starts + p, -1)
  return CoverageProfile(np.cumsum(delta[:-1]))


def reconstruct(
    patches: PatchTensor, passthrough: SeriesBatch | None = None
) -> SeriesBatch:
  """Places patches back at their origin and averages overlapping steps.

  Args:
    patches: patch tensor with its source geometry.
    passthrough: series that supplies the values of steps no patch covers.
      Must have shape [B, T, C] matching the patches.

  Returns:
    The reconstructed [B, T, C] batch.
  """
  batch, n_p, channels, p = patches.data.shape
  counts = coverage(patches.length, patches.p, patches.s).counts
  total = np.zeros((batch, patches.length, channels))
  # ascending patch order per time index, divided once by K_tau
  for i in range(n_p):
    start = i * patches.s
    total[:, start : start + p, :] += patches.data[:, i].transpose(0, 2, 1)

  covered = counts > 0
  result = np.empty_like(total)
  result[:, covered, :] = total[:, covered, :] / counts[covered, None]
  if not np.all(covered):
    if passthrough is None:
      raise ReconstructionError(
          f'Time steps {np.flatnonzero(~covered).tolist()} are covered by no'
          f' patch (T={patches.length}, p={patches.p}, s={patches.s}) and no'
          ' pass-through series was given.'
      )
    expected = (batch, patches.length, channels)
    for axis, size, actual in zip(AXES, expected, passthrough.shape):
      if size != actual:
        raise DimensionError(axis, size, actual, 'reconstruct pass-through')
    result[:, ~covered, :] = passthrough.data[:, ~covered, :]
  return SeriesBatch(result, allow_empty=True)
