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
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np
import pandas as pd

from ..utils.execution_context import is_dry_run
from ..utils.console import tps_print
from ..utils.file import ensure_parent_directory
from .errors import BoundsError, ConfigError, DataError, DimensionError
from .series import SeriesBatch, SplitPair, concat_time

ROLE_COLUMN = 'role'
WINDOW_ID_COLUMN = 'window_id'
SOURCE_COLUMN = 'source'
STEP_COLUMN = 'step'
TIMESTAMP_COLUMN = 'timestamp'
FLOAT_FORMAT = '%.17g'

DEFAULT_SPLIT_FRACTIONS = (0.7, 0.1, 0.2)
_NON_FINITE_TOKENS = {
    'nan',
    '+nan',
    '-nan',
    'inf',
    '+inf',
    '-inf',
    'infinity',
    '+infinity',
    '-infinity',
}


class Role(str, enum.Enum):
  ORIGINAL = 'original'
  SYNTHETIC = 'synthetic'


@dataclass(frozen=True)
class SplitSizes:
  train: int
  val: int
  test: int

  def __post_init__(self):
    if self.train < 2:
      raise ConfigError(f'Train split needs at least 2 rows, got {self.train}.')
    if self.val < 1 or self.test < 1:
      raise ConfigError(
          f'Validation and test splits need at least 1 row, got'
          f' ({self.val}, {self.test}).'
      )

  @property
  def total(self) -> int:
    return self.train + self.val + self.test


# Row counts per split for the usual forecasting benchmarks.
DATASET_PRESETS: dict[str, SplitSizes] = {
    'ETTh1': SplitSizes(8545, 2881, 2881),
    'ETTh2': SplitSizes(8545, 2881, 2881),
    'ETTm1': SplitSizes(34465, 11521, 11521),
    'ETTm2': SplitSizes(34465, 11521, 11521),
    'Exchange': SplitSizes(5120, 665, 1422),
    'Weather': SplitSizes(36792, 5271, 10540),
    'ECL': SplitSizes(18317, 2633, 5261),
    'Traffic': SplitSizes(12185, 1757, 3509),
    'ILI': SplitSizes(629, 98, 194),
    'PeMS03': SplitSizes(15617, 5135, 5135),
    'PeMS04': SplitSizes(10172, 3375, 3375),
    'PeMS07': SplitSizes(16911, 5622, 5622),
    'PeMS08': SplitSizes(10690, 3548, 3548),
}


@dataclass(frozen=True)
class DatasetSpec:
  """Where a dataset lives and how it is cut into windows.

  Attributes:
    path: CSV file with one header row.
    t: look-back length.
    h: horizon length.
    channels: channel columns by name or zero-based index; empty means every
      column except the timestamp column.
    timestamp_column: optional column carried to the output, never used in math.
    split_sizes: explicit (train, val, test) row counts.
    split_fractions: (train, val, test) fractions of the row count, used when
      split_sizes is not given.
    delimiter: field separator.
    window_stride: step between consecutive window starts.
  """

  path: str
  t: int
  h: int
  channels: tuple[str, ...] = ()
  timestamp_column: str | None = None
  split_sizes: SplitSizes | None = None
  split_fractions: tuple[float, float, float] | None = None
  delimiter: str = ','
  window_stride: int = 1

  def __post_init__(self):
    if self.t < 1 or self.h < 1:
      raise ConfigError(
          f'Look-back t={self.t} and horizon h={self.h} must be at least 1.'
      )
    if self.window_stride < 1:
      raise ConfigError(
          f'Window stride {self.window_stride} must be at least 1.'
      )
    if self.split_sizes is not None and self.split_fractions is not None:
      raise ConfigError('Give either split sizes or split fractions, not both.')
    if self.split_fractions is not None:
      fractions = tuple(float(f) for f in self.split_fractions)
      if len(fractions) != 3 or any(f <= 0 for f in fractions):
        raise ConfigError(
            f'Split fractions {fractions} must be three positive numbers.'
        )
      if sum(fractions) > 1 + 1e-9:
        raise ConfigError(f'Split fractions {fractions} add up to more than 1.')
      object.__setattr__(self, 'split_fractions', fractions)
    object.__setattr__(self, 'channels', tuple(str(c) for c in self.channels))


@dataclass(frozen=True, eq=False)
class LoadedTable:
  """A parsed CSV: values as a [1, T, C] batch plus the column metadata."""

  series: SeriesBatch
  channel_names: tuple[str, ...]
  timestamps: tuple[str, ...] | None = None

  @property
  def rows(self) -> int:
    return self.series.length


@dataclass(frozen=True, eq=False)
class ChannelStats:
  """Per-channel train-split mean and standard deviation.

  Channels listed in `passthrough` were constant on the train split and are
  left unscaled (mean 0, std 1).
  """

  mean: np.ndarray
  std: np.ndarray
  passthrough: tuple[int, ...] = ()

  def __post_init__(self):
    if np.any(self.std <= 0):
      raise DataError('Standard deviations must be positive.')


@dataclass(frozen=True, eq=False)
class Splits:
  train: SeriesBatch
  val: SeriesBatch
  test: SeriesBatch
  stats: ChannelStats
  offsets: tuple[int, int, int] = field(default=(0, 0, 0))

  def get(self, name: str) -> SeriesBatch:
    if name not in ('train', 'val', 'test'):
      raise ConfigError(f'Unknown split {name}; use train, val or test.')
    return getattr(self, name)

  def offset(self, name: str) -> int:
    """Row of the loaded file where split `name` starts."""
    return self.offsets[('train', 'val', 'test').index(name)]


def _read_frame(spec: DatasetSpec) -> pd.DataFrame:
  try:
    return pd.read_csv(
        spec.path,
        sep=spec.delimiter,
        dtype=str,
        keep_default_na=False,
        skipinitialspace=True,
    )
  except FileNotFoundError as e:
    raise DataError(f'Dataset file {spec.path} does not exist.') from e
  except pd.errors.EmptyDataError as e:
    raise DataError(f'Dataset file {spec.path} is empty.') from e
  except (pd.errors.ParserError, OSError, UnicodeDecodeError) as e:
    raise DataError(f'Cannot read {spec.path}: {e}') from e


def _resolve_channels(frame: pd.DataFrame, spec: DatasetSpec) -> list[str]:
  columns = [str(c) for c in frame.columns]
  if spec.timestamp_column is not None and spec.timestamp_column not in columns:
    raise ConfigError(
        f'Timestamp column `{spec.timestamp_column}` is not in {spec.path}.'
    )
  if not spec.channels:
    return [c for c in columns if c != spec.timestamp_column]

  resolved = []
  for channel in spec.channels:
    if channel in columns:
      resolved.append(channel)
    elif channel.isdigit() and int(channel) < len(columns):
      resolved.append(columns[int(channel)])
    else:
      raise ConfigError(f'Channel column `{channel}` is not in {spec.path}.')
  if spec.timestamp_column in resolved:
    raise ConfigError(
        f'Column `{spec.timestamp_column}` cannot be both timestamp and'
        ' channel.'
    )
  return resolved


def _parse_column(frame: pd.DataFrame, name: str) -> np.ndarray:
  text = frame[name].str.strip()
  values = pd.to_numeric(text, errors='coerce').to_numpy(dtype=np.float64)
  bad = np.flatnonzero(~np.isfinite(values))
  if bad.size:
    row = int(bad[0])
    token = text.iloc[row]
    if token.lower() in _NON_FINITE_TOKENS:
      raise DataError(f'non-finite value {token!r}', row=row + 1, column=name)
    raise DataError(
        f'cannot parse {token!r} as a real number', row=row + 1, column=name
    )
  return values


def load_table(spec: DatasetSpec) -> LoadedTable:
  """Reads the channel columns of a CSV file in file order.

  Data rows are numbered from 1 in error messages; the header row is not
  counted.
  """
  frame = _read_frame(spec)
  if frame.empty:
    raise DataError(f'Dataset file {spec.path} has a header but no data rows.')
  names = _resolve_channels(frame, spec)
  if not names:
    raise ConfigError(f'No channel columns selected in {spec.path}.')
  values = np.stack([_parse_column(frame, name) for name in names], axis=1)
  timestamps = None
  if spec.timestamp_column is not None:
    timestamps = tuple(frame[spec.timestamp_column].tolist())
  return LoadedTable(
      series=SeriesBatch(values[None, :, :]),
      channel_names=tuple(names),
      timestamps=timestamps,
  )


def load_csv(spec: DatasetSpec) -> SeriesBatch:
  """The [1, T, C] values of the dataset in `spec`."""
  return load_table(spec).series


def resolve_split_sizes(spec: DatasetSpec, total_rows: int) -> SplitSizes:
  if spec.split_sizes is not None:
    sizes = spec.split_sizes
  else:
    fractions = spec.split_fractions or DEFAULT_SPLIT_FRACTIONS
    try:
      sizes = SplitSizes(*(int(math.floor(total_rows * f)) for f in fractions))
    except ConfigError as e:
      raise DataError(
          f'{total_rows} rows are too few for split fractions {fractions}: {e}'
      ) from e
  if sizes.total > total_rows:
    raise DataError(
        f'Splits ({sizes.train}, {sizes.val}, {sizes.test}) need'
        f' {sizes.total} rows; {spec.path} has {total_rows}.'
    )
  return sizes


def fit_stats(
    train: SeriesBatch,
    channel_names: Sequence[str] | None = None,
    pass_through_constant: bool = False,
) -> ChannelStats:
  """Mean and population standard deviation of each channel of `train`."""
  values = train.data.reshape(-1, train.channels)
  mean = values.mean(axis=0)
  std = values.std(axis=0)
  constant = np.flatnonzero(np.ptp(values, axis=0) == 0)
  if constant.size and not pass_through_constant:
    c = int(constant[0])
    name = channel_names[c] if channel_names else f'c{c}'
    raise DataError(
        'channel is constant on the train split and cannot be standardized',
        column=name,
    )
  mean[constant] = 0.0
  std[constant] = 1.0
  return ChannelStats(mean, std, tuple(int(c) for c in constant))


def standardize(x: SeriesBatch, stats: ChannelStats) -> SeriesBatch:
  if x.channels != stats.mean.shape[0]:
    raise DimensionError(
        'channel', stats.mean.shape[0], x.channels, 'standardize'
    )
  return SeriesBatch((x.data - stats.mean) / stats.std, allow_empty=True)


def destandardize(x: SeriesBatch, stats: ChannelStats) -> SeriesBatch:
  """Inverse of standardize: x * std + mean per channel."""
  if x.channels != stats.mean.shape[0]:
    raise DimensionError(
        'channel', stats.mean.shape[0], x.channels, 'destandardize'
    )
  return SeriesBatch(x.data * stats.std + stats.mean, allow_empty=True)


def split_standardize(
    x: SeriesBatch,
    spec: DatasetSpec,
    pass_through_constant: bool = False,
    channel_names: Sequence[str] | None = None,
) -> Splits:
  """Cuts x into chronological train, val and test splits.

  All three are scaled with the mean and standard deviation of train.
  """
  if x.batch_size != 1:
    raise DimensionError('batch', 1, x.batch_size, 'split_standardize')
  sizes = resolve_split_sizes(spec, x.length)
  train_end = sizes.train
  val_end = train_end + sizes.val
  test_end = val_end + sizes.test
  train = SeriesBatch(x.data[:, :train_end])
  stats = fit_stats(train, channel_names, pass_through_constant)
  return Splits(
      train=standardize(train, stats),
      val=standardize(SeriesBatch(x.data[:, train_end:val_end]), stats),
      test=standardize(SeriesBatch(x.data[:, val_end:test_end]), stats),
      stats=stats,
      offsets=(0, train_end, val_end),
  )


def window_count(length: int, t: int, h: int, stride: int = 1) -> int:
  if length < t + h:
    return 0
  return (length - t - h) // stride + 1


def window_starts(length: int, t: int, h: int, stride: int = 1) -> np.ndarray:
  """Start index k of every window [k, k+t) + [k+t, k+t+h) inside `length`."""
  if length < t + h:
    raise BoundsError(
        f'Split of length {length} is shorter than t + h = {t + h}.'
    )
  return np.arange(window_count(length, t, h, stride)) * stride


def gather_windows(
    split: SeriesBatch, t: int, h: int, starts: Sequence[int]
) -> SplitPair:
  """Materializes the windows starting at `starts`, in that order."""
  if split.batch_size != 1:
    raise DimensionError('batch', 1, split.batch_size, 'gather_windows')
  index = np.asarray(starts, dtype=np.intp)
  if index.size and (index.min() < 0 or index.max() > split.length - t - h):
    raise BoundsError(
        f'Window starts must lie in [0, {split.length - t - h}].'
    )
  steps = index[:, None] + np.arange(t + h)[None, :]
  windows = split.data[0][steps]
  return SplitPair(
      lookback=SeriesBatch(windows[:, :t], allow_empty=True),
      horizon=SeriesBatch(windows[:, t:], allow_empty=True),
  )


def window_batches(
    split: SeriesBatch, t: int, h: int, batch_size: int, stride: int = 1
) -> Iterator[SplitPair]:
  """Sliding (look-back, horizon) windows in batches of at most batch_size."""
  if batch_size < 1:
    raise ConfigError(f'Batch size {batch_size} must be at least 1.')
  starts = window_starts(split.length, t, h, stride)
  for first in range(0, starts.size, batch_size):
    yield gather_windows(split, t, h, starts[first : first + batch_size])


@dataclass(frozen=True, eq=False)
class LabelledBatch:
  """Windows ready to be written, tagged with their role and origin.

  Attributes:
    pair: the windows.
    role: whether the windows are originals or synthetic.
    window_ids: unique id of each emitted window.
    sources: index of the original window each sample came from.
    offsets: row of the loaded file holding step 0 of each sample; used to look
      up timestamps.
  """

  pair: SplitPair
  role: Role
  window_ids: np.ndarray
  sources: np.ndarray
  offsets: np.ndarray | None = None

  def __post_init__(self):
    for name in ('window_ids', 'sources'):
      if len(getattr(self, name)) != self.pair.batch_size:
        raise DimensionError(
            'batch', self.pair.batch_size, len(getattr(self, name)), name
        )
    object.__setattr__(self, 'role', Role(self.role))


def _columns(channels: int, with_timestamp: bool) -> list[str]:
  columns = [WINDOW_ID_COLUMN, ROLE_COLUMN, SOURCE_COLUMN, STEP_COLUMN]
  if with_timestamp:
    columns.append(TIMESTAMP_COLUMN)
  return columns + [f'c{c}' for c in range(channels)]


def _frame(
    batch: LabelledBatch, timestamps: Sequence[str] | None
) -> pd.DataFrame:
  x = concat_time(batch.pair.lookback, batch.pair.horizon)
  n, length, channels = x.shape
  frame = pd.DataFrame({
      WINDOW_ID_COLUMN: np.repeat(np.asarray(batch.window_ids), length),
      ROLE_COLUMN: batch.role.value,
      SOURCE_COLUMN: np.repeat(np.asarray(batch.sources), length),
      STEP_COLUMN: np.tile(np.arange(length), n),
  })
  if timestamps is not None:
    if batch.offsets is None:
      raise ConfigError('Timestamps need the file offset of every window.')
    rows = (np.asarray(batch.offsets)[:, None] + np.arange(length)).ravel()
    frame[TIMESTAMP_COLUMN] = np.asarray(timestamps, dtype=object)[rows]
  values = x.data.reshape(n * length, channels)
  for c in range(channels):
    frame[f'c{c}'] = values[:, c]
  return frame


def write_augmented(
    batches: Iterable[LabelledBatch],
    path: str,
    channels: int,
    timestamps: Sequence[str] | None = None,
) -> int:
  """Appends every batch to a CSV file; rows are written at full precision.

  Args:
    batches: labelled windows in output order.
    path: destination file, replaced if it exists.
    channels: number of value columns, needed to write the header of an empty
      stream.
    timestamps: timestamp of every row of the loaded file, or None.

  Returns:
    The number of windows written.
  """
  columns = _columns(channels, timestamps is not None)
  written = 0
  if is_dry_run():
    for batch in batches:
      written += batch.pair.batch_size
    tps_print(f'Would write {written} windows to {path}.')
    return written

  try:
    ensure_parent_directory(path)
    pd.DataFrame(columns=columns).to_csv(
        path, index=False, lineterminator='\n', encoding='utf-8'
    )
    for batch in batches:
      if batch.pair.channels != channels:
        raise DimensionError(
            'channel', channels, batch.pair.channels, 'write_augmented'
        )
      _frame(batch, timestamps)[columns].to_csv(
          path,
          mode='a',
          header=False,
          index=False,
          float_format=FLOAT_FORMAT,
          lineterminator='\n',
          encoding='utf-8',
      )
      written += batch.pair.batch_size
  except OSError as e:
    raise DataError(f'Cannot write {path}: {e}') from e
  return written


@dataclass(frozen=True, eq=False)
class AugmentedWindows:
  """Windows read back from a file produced by write_augmented.

  Attributes:
    window_ids: [N] window ids in file order.
    roles: [N] role of each window.
    sources: [N] original window index of each window.
    values: [N, L, C] window values, L = t + h.
  """

  window_ids: np.ndarray
  roles: tuple[Role, ...]
  sources: np.ndarray
  values: np.ndarray

  def _mask(self, role: Role) -> np.ndarray:
    return np.array([r == role for r in self.roles], dtype=bool)

  def originals(self) -> SeriesBatch:
    return SeriesBatch(self.values[self._mask(Role.ORIGINAL)], allow_empty=True)

  def aligned_pairs(self) -> tuple[SeriesBatch, SeriesBatch]:
    """(original, synthetic) batches aligned through the source column."""
    original_mask = self._mask(Role.ORIGINAL)
    by_source = {
        int(s): int(i)
        for i, s in zip(
            np.flatnonzero(original_mask), self.sources[original_mask]
        )
    }
    synthetic = np.flatnonzero(self._mask(Role.SYNTHETIC))
    missing = [
        int(self.sources[i])
        for i in synthetic
        if int(self.sources[i]) not in by_source
    ]
    if missing:
      raise DataError(
          f'Synthetic windows refer to missing original source {missing[0]}.',
          column=SOURCE_COLUMN,
      )
    if synthetic.size == 0:
      raise DataError('The file holds no synthetic windows to compare.')
    matched = [by_source[int(self.sources[i])] for i in synthetic]
    return (
        SeriesBatch(self.values[matched]),
        SeriesBatch(self.values[synthetic]),
    )


def read_augmented(path: str) -> AugmentedWindows:
  """Reads a file written by write_augmented back at full precision."""
  try:
    frame = pd.read_csv(
        path,
        dtype={ROLE_COLUMN: str},
        float_precision='round_trip',
        keep_default_na=False,
    )
  except FileNotFoundError as e:
    raise DataError(f'Augmented file {path} does not exist.') from e
  except (pd.errors.ParserError, pd.errors.EmptyDataError, OSError) as e:
    raise DataError(f'Cannot read {path}: {e}') from e

  required = [WINDOW_ID_COLUMN, ROLE_COLUMN, SOURCE_COLUMN, STEP_COLUMN]
  for column in required:
    if column not in frame.columns:
      raise DataError(f'Augmented file {path} has no column', column=column)
  value_columns = [
      c for c in frame.columns if c.startswith('c') and c[1:].isdigit()
  ]
  if not value_columns:
    raise DataError(f'Augmented file {path} has no value columns c0, c1, ...')
  if frame.empty:
    return AugmentedWindows(
        window_ids=np.zeros(0, dtype=np.int64),
        roles=(),
        sources=np.zeros(0, dtype=np.int64),
        values=np.zeros((0, 1, len(value_columns))),
    )

  steps = frame[STEP_COLUMN].to_numpy()
  length = int(steps.max()) + 1
  whole = len(frame) % length == 0
  if not whole or np.any(
      steps != np.tile(np.arange(length), len(frame) // length)
  ):
    raise DataError(
        f'Rows of {path} do not form whole windows of {length} steps.',
        column=STEP_COLUMN,
    )
  n = len(frame) // length
  heads = frame.iloc[::length]
  try:
    roles = tuple(Role(r) for r in heads[ROLE_COLUMN])
  except ValueError as e:
    raise DataError(f'Unknown role in {path}: {e}', column=ROLE_COLUMN) from e
  values = frame[value_columns].to_numpy(dtype=np.float64)
  return AugmentedWindows(
      window_ids=heads[WINDOW_ID_COLUMN].to_numpy(dtype=np.int64),
      roles=roles,
      sources=heads[SOURCE_COLUMN].to_numpy(dtype=np.int64),
      values=values.reshape(n, length, len(value_columns)),
  )


def read_matrix(path: str, delimiter: str = ',') -> np.ndarray:
  """Every column of a headed numeric CSV as a [rows, columns] array."""
  try:
    frame = pd.read_csv(path, sep=delimiter, dtype=str, keep_default_na=False)
  except FileNotFoundError as e:
    raise DataError(f'File {path} does not exist.') from e
  except (pd.errors.ParserError, pd.errors.EmptyDataError, OSError) as e:
    raise DataError(f'Cannot read {path}: {e}') from e
  if frame.empty:
    raise DataError(f'File {path} has a header but no data rows.')
  return np.stack([_parse_column(frame, str(c)) for c in frame.columns], axis=1)
