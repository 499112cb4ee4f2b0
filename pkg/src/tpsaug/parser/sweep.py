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

from ..commands.sweep import sweep
from ..core.scorer import RIDGE_SCORER, SCORERS
from .augment import add_output_arguments
from .common import (
    add_augmentation_arguments,
    add_dataset_arguments,
    add_max_windows_argument,
    add_shared_arguments,
)
from .validators import file_path_type


def set_sweep_parser(sweep_parser: argparse.ArgumentParser):
  dataset_arguments = sweep_parser.add_argument_group(
      'Dataset Arguments', 'Which CSV to read and how to cut it into windows.'
  )
  sweep_arguments = sweep_parser.add_argument_group(
      'Sweep Arguments', 'Candidates, scorer and what to do with the winner.'
  )
  add_dataset_arguments(dataset_arguments)
  add_max_windows_argument(dataset_arguments)
  sweep_arguments.add_argument(
      '--grid-file',
      type=file_path_type,
      default=None,
      help=(
          'One `p,s,alpha` candidate per line. Defaults to twenty tuples drawn'
          ' from the usual candidate lists.'
      ),
  )
  sweep_arguments.add_argument(
      '--scorer',
      type=str,
      choices=sorted(SCORERS),
      default=RIDGE_SCORER,
      help=(
          'Validation scorer. `ridge` fits a channel-independent linear'
          ' forecaster on the augmented train windows; `naive` repeats the'
          ' last look-back value.'
      ),
  )
  sweep_arguments.add_argument(
      '--apply',
      action=argparse.BooleanOptionalAction,
      default=False,
      help='Augment the train split with the best candidate, like `augment`.',
  )
  add_augmentation_arguments(sweep_arguments, include_tps_parameters=False)
  add_output_arguments(sweep_arguments, required=False)
  add_shared_arguments(sweep_parser)
  sweep_parser.set_defaults(func=sweep, p=None, s=None, alpha=None)
