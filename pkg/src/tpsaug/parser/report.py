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

from ..commands.report import report
from .augment import SPLIT_CHOICES
from .common import (
    add_augmentation_arguments,
    add_dataset_arguments,
    add_max_windows_argument,
    add_shared_arguments,
)
from .validators import file_path_type


def set_report_parser(report_parser: argparse.ArgumentParser):
  source_arguments = report_parser.add_argument_group(
      'Source Arguments',
      'Compare an augmented file with its originals, or generate the'
      ' augmentation in memory from a dataset. The ordering of distribution'
      ' shift between variants depends on the data: overlapping TPS shows'
      ' lower DTW than the non-overlapping shuffle on ETTh2, while strongly'
      ' seasonal series can reverse it. When p divides t + h the'
      ' non-overlapping shuffle only permutes values, so its KS and'
      ' Wasserstein distances are zero.',
  )
  source_arguments.add_argument(
      '--augmented-file',
      type=file_path_type,
      default=None,
      help='CSV written by `tps augment`.',
  )
  add_dataset_arguments(source_arguments, required=False)
  source_arguments.add_argument(
      '--split',
      type=str,
      choices=SPLIT_CHOICES,
      default='train',
      help='Split to augment when reporting from a dataset.',
  )
  add_max_windows_argument(source_arguments)
  add_augmentation_arguments(source_arguments)

  forecast_arguments = report_parser.add_argument_group(
      'Forecast Arguments', 'Point and probabilistic forecast metrics.'
  )
  forecast_arguments.add_argument(
      '--target-file',
      type=file_path_type,
      default=None,
      help='Numeric CSV with the true values.',
  )
  forecast_arguments.add_argument(
      '--prediction-file',
      type=file_path_type,
      default=None,
      help='Numeric CSV with point predictions, same shape as the target.',
  )
  forecast_arguments.add_argument(
      '--quantile-files',
      type=file_path_type,
      nargs='+',
      default=None,
      help=(
          'Nine numeric CSVs with the 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.8, 0.9'
          ' and 0.95 quantile predictions, in that order.'
      ),
  )
  report_parser.add_argument(
      '--json-out',
      type=str,
      default=None,
      help='Also write the metrics as JSON key/value pairs to this file.',
  )
  add_shared_arguments(report_parser)
  report_parser.set_defaults(func=report)
