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

from ..core.datasets import read_augmented, read_matrix
from ..core.errors import ConfigError
from ..core.manifest import write_manifest
from ..core.metrics import (
    MetricsReport,
    QuantileSet,
    distribution_shift_report,
    point_report,
    probabilistic_report,
)
from ..core.pipeline import augment_stream, collect
from ..core.workers import get_thread_count
from ..utils.console import print_table, tps_exit, tps_print
from ..utils.file import write_text_file
from ..utils.objects import evenly_spaced_indices
from .common import (
    augment_plan_from_args,
    exit_on_error,
    load_dataset,
    new_manifest,
    resolve_output_path,
    resolve_seed,
    selected_windows,
    validate_plan,
)


def _shift_from_file(args, manifest) -> MetricsReport:
  windows = read_augmented(args.augmented_file)
  manifest.add_input(args.augmented_file)
  original, synthetic = windows.aligned_pairs()
  keep = evenly_spaced_indices(original.batch_size, args.max_windows)
  tps_print(
      f'Comparing {len(keep)} synthetic windows of {args.augmented_file} with'
      ' their originals'
  )
  return distribution_shift_report(
      original.data[keep], synthetic.data[keep]
  )


def _shift_from_dataset(args, manifest) -> MetricsReport:
  spec, _, splits = load_dataset(args)
  manifest.add_input(spec.path)
  split = splits.get(args.split)
  plan = augment_plan_from_args(args)
  validate_plan(plan, spec.t, spec.h, split.channels)
  windows = selected_windows(split.length, spec, args.max_windows)
  generated = collect(
      augment_stream(
          split,
          spec.t,
          spec.h,
          plan,
          stride=spec.window_stride,
          windows=windows,
          threads=get_thread_count(),
      )
  )
  original, synthetic = generated.aligned_pairs()
  tps_print(
      f'Comparing {synthetic.batch_size} synthetic windows of the'
      f' {args.split} split with their originals'
  )
  return distribution_shift_report(original, synthetic)


def _forecast_report(args, manifest) -> MetricsReport:
  target = read_matrix(args.target_file)
  manifest.add_input(args.target_file)
  report = MetricsReport()
  if args.prediction_file:
    report.extend(point_report(target, read_matrix(args.prediction_file)))
    manifest.add_input(args.prediction_file)
  if args.quantile_files:
    levels = QuantileSet()
    if len(args.quantile_files) != len(levels.levels):
      raise ConfigError(
          f'--quantile-files needs {len(levels.levels)} files, one per level'
          f' {levels.levels}; got {len(args.quantile_files)}.'
      )
    quantiles = [read_matrix(path) for path in args.quantile_files]
    for path in args.quantile_files:
      manifest.add_input(path)
    report.extend(probabilistic_report(target, quantiles, levels))
  return report


@exit_on_error
def report(args) -> None:
  """Prints distribution-shift and forecast metrics, optionally as JSON too.

  Args:
    args: user provided arguments for running the command.
  """
  if args.augmented_file and args.data:
    raise ConfigError('Use either --augmented-file or --data, not both.')
  if args.target_file is None and (args.prediction_file or args.quantile_files):
    raise ConfigError('Forecast metrics need --target-file.')
  if args.target_file and not (args.prediction_file or args.quantile_files):
    raise ConfigError(
        '--target-file needs --prediction-file or --quantile-files.'
    )
  if not (args.augmented_file or args.data or args.target_file):
    raise ConfigError(
        'Nothing to report: give --augmented-file, a dataset with --data, or'
        ' --target-file.'
    )
  if args.data and (args.t is None or args.h is None):
    raise ConfigError('A dataset report needs --t and --h.')

  manifest = new_manifest(args, 'report', resolve_seed(args))
  metrics = MetricsReport()
  if args.augmented_file:
    metrics.extend(_shift_from_file(args, manifest))
  elif args.data:
    metrics.extend(_shift_from_dataset(args, manifest))
  if args.target_file:
    metrics.extend(_forecast_report(args, manifest))

  print_table('Metrics report', metrics.rows())
  if args.json_out:
    out = resolve_output_path(args.json_out)
    write_text_file(metrics.to_json(), out)
    manifest.add_output(out)
    manifest.finish()
    write_manifest(manifest, out)
  tps_exit(0)
