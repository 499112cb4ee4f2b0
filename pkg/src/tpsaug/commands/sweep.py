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

from ..core.errors import ConfigError
from ..core.pipeline import Method
from ..core.scorer import get_scorer
from ..core.sweep import SweepGrid, baseline_score, run_sweep
from ..core.workers import get_thread_count
from ..utils.console import print_table, tps_exit, tps_print
from .augment import augment
from .common import (
    augment_plan_from_args,
    exit_on_error,
    load_dataset,
    selected_windows,
    tps_config_from_args,
)


@exit_on_error
def sweep(args) -> None:
  """Ranks (p, s, alpha) candidates by the validation MSE of a cheap scorer.

  With --apply the best candidate augments the train split as `augment` would.

  Args:
    args: user provided arguments for running the command.
  """
  if Method(args.method) != Method.TPS:
    raise ConfigError('sweep tunes TPS parameters; use --method tps.')
  if args.apply and not args.out:
    raise ConfigError('--apply needs --out.')
  if args.grid_file:
    grid = SweepGrid.from_file(args.grid_file)
  else:
    grid = SweepGrid.default()
  scorer = get_scorer(args.scorer)
  spec, _, splits = load_dataset(args)

  # p, s and alpha are replaced per candidate by run_sweep
  base_plan = augment_plan_from_args(
      args, tps=tps_config_from_args(args, p=1, s=1, alpha=1.0)
  )
  train_windows = selected_windows(splits.train.length, spec, args.max_windows)
  val_windows = selected_windows(splits.val.length, spec, args.max_windows)
  tps_print(
      f'Evaluating {len(grid.candidates)} candidates with the {scorer.name}'
      ' scorer on the validation split'
  )
  results = run_sweep(
      grid,
      splits.train,
      splits.val,
      spec.t,
      spec.h,
      base_plan,
      scorer,
      stride=spec.window_stride,
      train_windows=train_windows,
      val_windows=val_windows,
      threads=get_thread_count(),
  )
  reference = baseline_score(
      splits.train,
      splits.val,
      spec.t,
      spec.h,
      scorer,
      stride=spec.window_stride,
      train_windows=train_windows,
      val_windows=val_windows,
  )
  print_table(
      'Sweep ranking (lower validation MSE is better)',
      [
          {
              'RANK': rank,
              'P': r.candidate.p,
              'S': r.candidate.s,
              'ALPHA': f'{r.candidate.alpha:g}',
              'VAL_MSE': f'{r.val_mse:.6f}',
          }
          for rank, r in enumerate(results, start=1)
      ],
  )
  tps_print(f'Validation MSE without augmentation: {reference:.6f}')
  best = results[0].candidate
  tps_print(f'Selected (p, s, alpha) = {best.label()}')

  if args.apply:
    args.p, args.s, args.alpha = best.p, best.s, best.alpha
    args.split = 'train'
    augment(args)
  tps_exit(0)
