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

from ..commands.augment import augment
from .common import (
    add_augmentation_arguments,
    add_dataset_arguments,
    add_shared_arguments,
)

SPLIT_CHOICES = ['train', 'val', 'test']


def add_output_arguments(parser_or_group, required: bool = True) -> None:
  parser_or_group.add_argument(
      '--out',
      type=str,
      default=None,
      help=(
          'Output CSV. A run manifest is written next to it as'
          ' <out>.manifest.yaml.'
      ),
      required=required,
  )
  parser_or_group.add_argument(
      '--format',
      type=str,
      choices=['csv'],
      default='csv',
      help='Output format.',
  )


def set_augment_parser(augment_parser: argparse.ArgumentParser):
  dataset_arguments = augment_parser.add_argument_group(
      'Dataset Arguments', 'Which CSV to read and how to cut it into windows.'
  )
  augmentation_arguments = augment_parser.add_argument_group(
      'Augmentation Arguments', 'How synthetic windows are generated.'
  )
  output_arguments = augment_parser.add_argument_group(
      'Output Arguments', 'Where the original and synthetic windows go.'
  )
  add_dataset_arguments(dataset_arguments)
  dataset_arguments.add_argument(
      '--split',
      type=str,
      choices=SPLIT_CHOICES,
      default='train',
      help='Split to augment.',
  )
  add_augmentation_arguments(augmentation_arguments)
  add_output_arguments(output_arguments)
  add_shared_arguments(augment_parser)
  augment_parser.set_defaults(func=augment)
