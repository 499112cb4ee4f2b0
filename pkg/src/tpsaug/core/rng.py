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

from .errors import ConfigError

MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class RngStream:
  """A key into a tree of independent random streams.

  Streams are derived from (seed, stream ids) alone through numpy's
  SeedSequence, so element b of a batch draws the same numbers no matter which
  worker processes it or in what order.

  Attributes:
    seed: 64-bit master seed.
    stream: path of non-negative substream ids below the master seed.
  """

  seed: int
  stream: tuple[int, ...] = ()

  def __post_init__(self):
    if not 0 <= self.seed <= MAX_SEED:
      raise ConfigError(f'Seed {self.seed} must be in [0, 2**64 - 1].')
    if any(i < 0 for i in self.stream):
      raise ConfigError(f'Substream ids must be non-negative: {self.stream}.')

  def substream(self, *ids: int) -> 'RngStream':
    return RngStream(self.seed, self.stream + tuple(int(i) for i in ids))

  def generator(self) -> np.random.Generator:
    """A fresh generator positioned at the start of this stream."""
    sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=self.stream)
    return np.random.Generator(np.random.PCG64(sequence))

  def subset(self, n: int, k: int) -> np.ndarray:
    """k distinct indices of range(n), sorted ascending."""
    return np.sort(fisher_yates(n, self.generator())[:k])


def fisher_yates(n: int, generator: np.random.Generator) -> np.ndarray:
  """Uniform random permutation of range(n) by the Durstenfeld shuffle."""
  order = np.arange(n)
  for i in range(n - 1, 0, -1):
    j = int(generator.integers(0, i + 1))
    order[i], order[j] = order[j], order[i]
  return order
