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
from typing import Protocol

import numpy as np
from sklearn.linear_model import Ridge

from .errors import ConfigError, DimensionError
from .metrics import mse
from .series import SplitPair

RIDGE_SCORER = 'ridge'
NAIVE_SCORER = 'naive'


class Scorer(Protocol):
  """Scores augmented training windows by validation MSE; lower is better."""

  name: str

  def score(self, train: SplitPair, val: SplitPair) -> float:
    ...


def _channel_rows(pair: SplitPair) -> tuple[np.ndarray, np.ndarray]:
  """One regression row per (window, channel): look-back -> horizon."""
  lookback = pair.lookback.data.transpose(0, 2, 1).reshape(-1, pair.t)
  horizon = pair.horizon.data.transpose(0, 2, 1).reshape(-1, pair.h)
  return lookback, horizon


def _check_compatible(train: SplitPair, val: SplitPair) -> None:
  if train.t != val.t:
    raise DimensionError('time', train.t, val.t, 'scorer look-back')
  if train.h != val.h:
    raise DimensionError('time', train.h, val.h, 'scorer horizon')
  if train.batch_size == 0 or val.batch_size == 0:
    raise ConfigError('Scoring needs at least one train and one val window.')


@dataclass(frozen=True)
class RidgeScorer:
  """Channel-independent linear forecaster with an L2 penalty.

  A cheap stand-in for a deep backbone when ranking augmentation settings.
  """

  regularization: float = 1.0
  name: str = RIDGE_SCORER

  def score(self, train: SplitPair, val: SplitPair) -> float:
    _check_compatible(train, val)
    features, targets = _channel_rows(train)
    model = Ridge(alpha=self.regularization, fit_intercept=True)
    model.fit(features, targets)
    val_features, _ = _channel_rows(val)
    predicted = model.predict(val_features).reshape(
        val.batch_size, val.channels, val.h
    )
    return mse(val.horizon.data, predicted.transpose(0, 2, 1))


@dataclass(frozen=True)
class NaiveScorer:
  """Repeats the last look-back value over the horizon; ignores train data."""

  name: str = NAIVE_SCORER

  def score(self, train: SplitPair, val: SplitPair) -> float:
    _check_compatible(train, val)
    last = val.lookback.data[:, -1:, :]
    return mse(val.horizon.data, np.repeat(last, val.h, axis=1))


SCORERS: dict[str, type] = {
    RIDGE_SCORER: RidgeScorer,
    NAIVE_SCORER: NaiveScorer,
}


def get_scorer(name: str) -> Scorer:
  if name not in SCORERS:
    raise ConfigError(
        f'Unknown scorer {name}; choose one of {", ".join(sorted(SCORERS))}.'
    )
  return SCORERS[name]()
