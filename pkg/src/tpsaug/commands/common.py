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

import argparse
import functools
import os
import sys
from typing import Callable

import numpy as np

from ..core.config import (
    BATCH_SIZE_KEY,
    DEFAULT_BATCH_SIZE,
    DEFAULT_DELIMITER,
    DEFAULT_SEED,
    DEFAULT_SEED_KEY,
    DELIMITER_KEY,
    OUTPUT_DIR_KEY,
    get_int_setting,
    get_str_setting,
)
from ..core.datasets import (
    DATASET_PRESETS,
    DatasetSpec,
    LoadedTable,
    Splits,
    load_table,
    split_standardize,
    window_count,
)
from ..core.errors import ConfigError, TpsError
from ..core.manifest import RunManifest
from ..core.pipeline import AugmentPlan, Method
from ..core.tps import TpsConfig, Variant
from ..parser.common import retrieve_flags
from ..utils.console import tps_exit, tps_print
from ..utils.file import confirm_overwrite
from ..utils.objects import evenly_spaced_indices


def exit_on_error(command: Callable[[argparse.Namespace], None]):
  """Turns library errors into a message and the error's exit code."""

  @functools.wraps(command)
  def wrapper(args: argparse.Namespace) -> None:
    try:
      command(args)
    except TpsError as e:
      tps_print(f'Error: {e}')
      tps_exit(e.exit_code)

  return wrapper


def resolve_seed(args: argparse.Namespace) -> int:
  if getattr(args, 'seed', None) is not None:
    return int(args.seed)
  return get_int_setting(DEFAULT_SEED_KEY, DEFAULT_SEED)


def resolve_batch_size(args: argparse.Namespace) -> int:
  if getattr(args, 'batch_size', None) is not None:
    return int(args.batch_size)
  return get_int_setting(BATCH_SIZE_KEY, DEFAULT_BATCH_SIZE)


def resolve_output_path(path: str) -> str:
  """Relative output paths go under the `output-dir` config key when set."""
  output_dir = get_str_setting(OUTPUT_DIR_KEY, '')
  if output_dir and not os.path.isabs(path):
    return os.path.join(os.path.expanduser(output_dir), path)
  return path


def dataset_spec_from_args(args: argparse.Namespace) -> DatasetSpec:
  if args.split_preset is not None and args.split_fractions is not None:
    raise ConfigError('Use either --split-preset or --split-fractions.')
  delimiter = args.delimiter
  if delimiter is None:
    delimiter = get_str_setting(DELIMITER_KEY, DEFAULT_DELIMITER)
  return DatasetSpec(
      path=args.data,
      t=args.t,
      h=args.h,
      channels=tuple(args.channels or ()),
      timestamp_column=args.timestamp_column,
      split_sizes=(
          DATASET_PRESETS[args.split_preset] if args.split_preset else None
      ),
      split_fractions=args.split_fractions,
      delimiter=delimiter,
      window_stride=args.window_stride,
  )


def load_dataset(
    args: argparse.Namespace,
) -> tuple[DatasetSpec, LoadedTable, Splits]:
  """Reads the CSV named by --data and splits and standardizes it."""
  spec = dataset_spec_from_args(args)
  table = load_table(spec)
  splits = split_standardize(
      table.series,
      spec,
      pass_through_constant=args.pass_through_constant,
      channel_names=table.channel_names,
  )
  tps_print(
      f'Loaded {table.rows} rows x {len(table.channel_names)} channels from'
      f' {spec.path}; splits (train, val, test) ='
      f' ({splits.train.length}, {splits.val.length}, {splits.test.length})'
  )
  if splits.stats.passthrough:
    names = [table.channel_names[c] for c in splits.stats.passthrough]
    tps_print(f'Constant channels left unscaled: {", ".join(names)}')
  return spec, table, splits


def tps_config_from_args(
    args: argparse.Namespace,
    p: int | None = None,
    s: int | None = None,
    alpha: float | None = None,
) -> TpsConfig:
  p = args.p if p is None else p
  s = args.s if s is None else s
  alpha = args.alpha if alpha is None else alpha
  missing = [
      flag
      for flag, value in (('--p', p), ('--s', s), ('--alpha', alpha))
      if value is None
  ]
  if missing:
    raise ConfigError(f'The tps method needs {", ".join(missing)}.')
  return TpsConfig(
      p=p,
      s=s,
      alpha=alpha,
      seed=resolve_seed(args),
      variant=Variant(args.variant),
      level=args.level,
  )


def augment_plan_from_args(
    args: argparse.Namespace, tps: TpsConfig | None = None
) -> AugmentPlan:
  method = Method(args.method)
  if method == Method.TPS and tps is None:
    tps = tps_config_from_args(args)
  return AugmentPlan(
      method=method,
      tps=tps if method == Method.TPS else None,
      segment_rate=args.segment_rate,
      seed=resolve_seed(args),
      size=args.size,
      ratio=args.ratio,
      batch_size=resolve_batch_size(args),
      level=args.level,
  )


def validate_plan(plan: AugmentPlan, t: int, h: int, channels: int) -> None:
  """Fails early when the plan cannot run on windows of this shape."""
  if plan.method == Method.UPSAMPLE or plan.tps is None:
    return
  plan.tps.validate_for_window(t, h, channels)


def require_windows(length: int, spec: DatasetSpec) -> int:
  """Window count of a split of `length` rows; fails when there is none."""
  total = window_count(length, spec.t, spec.h, spec.window_stride)
  if total == 0:
    raise ConfigError(
        f'A split of length {length} holds no window of t + h ='
        f' {spec.t + spec.h} steps.'
    )
  return total


def selected_windows(
    length: int, spec: DatasetSpec, max_windows: int | None
) -> np.ndarray | None:
  """Evenly spaced window indices when --max-windows caps the count."""
  total = require_windows(length, spec)
  if max_windows is None or max_windows >= total:
    return None
  return np.asarray(evenly_spaced_indices(total, max_windows))


def ensure_writable(path: str) -> None:
  if not confirm_overwrite(path):
    tps_print(f'{path} already exists, TPS will not overwrite it.')
    tps_exit(1)


def _plain(value):
  if isinstance(value, (str, int, float, bool)) or value is None:
    return value
  if isinstance(value, (list, tuple)):
    return [_plain(v) for v in value]
  return str(value)


def new_manifest(
    args: argparse.Namespace, command: str, seed: int | None = None
) -> RunManifest:
  """A started manifest holding the command line and every parsed flag."""
  settings = {
      key: _plain(value)
      for key, value in sorted(vars(args).items())
      if not key.startswith('_') and key != 'func'
  }
  settings['supplied_flags'] = retrieve_flags(args)
  manifest = RunManifest(
      command=command, argv=list(sys.argv[1:]), settings=settings, seed=seed
  )
  manifest.start()
  return manifest
