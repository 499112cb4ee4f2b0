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

from collections import Counter

import numpy as np

from ..core.datasets import Role, write_augmented
from ..core.manifest import write_manifest
from ..core.pipeline import augment_stream
from ..core.series import concat_time
from ..core.workers import get_thread_count
from ..utils.console import print_table, tps_exit, tps_print
from ..utils.execution_context import is_dry_run
from .common import (
    augment_plan_from_args,
    ensure_writable,
    exit_on_error,
    load_dataset,
    new_manifest,
    require_windows,
    resolve_output_path,
    resolve_seed,
    validate_plan,
)


class _RoleSummary:
  """Running window count, mean and sample standard deviation per role.

  Each batch's count, mean and sum of squared deviations is merged into the
  running totals with the pairwise update.
  """

  def __init__(self) -> None:
    self.windows: Counter = Counter()
    self._moments: dict[Role, tuple[int, float, float]] = {}

  def track(self, batches):
    for batch in batches:
      values = concat_time(batch.pair.lookback, batch.pair.horizon).data
      self.windows[batch.role] += batch.pair.batch_size
      if values.size:
        self._merge(batch.role, values)
      yield batch

  def _merge(self, role: Role, values: np.ndarray) -> None:
    count, mean, squares = self._moments.get(role, (0, 0.0, 0.0))
    size = values.size
    batch_mean = float(values.mean())
    batch_squares = float(np.square(values - batch_mean).sum())
    total = count + size
    delta = batch_mean - mean
    self._moments[role] = (
        total,
        mean + delta * size / total,
        squares + batch_squares + delta**2 * count * size / total,
    )

  def rows(self) -> list[dict]:
    rows = []
    for role in Role:
      count, mean, squares = self._moments.get(role, (0, 0.0, 0.0))
      std = (squares / (count - 1)) ** 0.5 if count > 1 else 0.0
      rows.append({
          'ROLE': role.value,
          'WINDOWS': self.windows[role],
          'MEAN': f'{mean:.6g}',
          'STD': f'{std:.6g}',
      })
    return rows


@exit_on_error
def augment(args) -> None:
  """Writes original and synthetic windows of one dataset split to CSV.

  Args:
    args: user provided arguments for running the command.
  """
  seed = resolve_seed(args)
  manifest = new_manifest(args, 'augment', seed)
  spec, table, splits = load_dataset(args)
  manifest.add_input(spec.path)
  split = splits.get(args.split)
  plan = augment_plan_from_args(args)
  validate_plan(plan, spec.t, spec.h, split.channels)
  require_windows(split.length, spec)

  out = resolve_output_path(args.out)
  ensure_writable(out)
  tps_print(
      f'Augmenting the {args.split} split with {plan.method.value}: size'
      f' {plan.size}, ratio {plan.ratio}, batch size {plan.batch_size}, seed'
      f' {seed}'
  )
  summary = _RoleSummary()
  stream = augment_stream(
      split,
      spec.t,
      spec.h,
      plan,
      stride=spec.window_stride,
      offset=splits.offset(args.split),
      threads=get_thread_count(),
  )
  written = write_augmented(
      summary.track(stream), out, split.channels, table.timestamps
  )
  print_table('Augmentation summary', summary.rows())
  manifest.summary = {
      'windows': written,
      'original': summary.windows[Role.ORIGINAL],
      'synthetic': summary.windows[Role.SYNTHETIC],
  }
  if not is_dry_run():
    tps_print(f'Wrote {written} windows to {out}')
    manifest.add_output(out)
  manifest.finish()
  write_manifest(manifest, out)
  tps_exit(0)
