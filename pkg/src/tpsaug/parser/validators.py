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
import os

from ..core.rng import MAX_SEED


def positive_int_type(value):
  """Validate that the value is an integer >= 1."""
  try:
    number = int(value)
  except ValueError:
    number = 0
  if number < 1:
    raise argparse.ArgumentTypeError(
        f'Value must be a positive integer. Value is currently {value}'
    )
  return number


def seed_type(value):
  try:
    number = int(value)
  except ValueError:
    number = -1
  if not 0 <= number <= MAX_SEED:
    raise argparse.ArgumentTypeError(
        f'Seed must be an integer in [0, 2**64 - 1]. Seed is currently {value}'
    )
  return number


def _float(value) -> float:
  try:
    return float(value)
  except ValueError as e:
    raise argparse.ArgumentTypeError(f'{value} is not a number') from e


def shuffle_rate_type(value):
  """Validate that the value lies in (0, 1]."""
  number = _float(value)
  if not 0 < number <= 1:
    raise argparse.ArgumentTypeError(
        f'Value must be in (0, 1]. Value is currently {value}'
    )
  return number


def ratio_type(value):
  """Validate that the value lies in [0, 1]."""
  number = _float(value)
  if not 0 <= number <= 1:
    raise argparse.ArgumentTypeError(
        f'Value must be in [0, 1]. Value is currently {value}'
    )
  return number


def split_fractions_type(value):
  """Parse `train,val,test` fractions such as `0.7,0.1,0.2`."""
  parts = [part.strip() for part in value.split(',')]
  fractions = [_float(part) for part in parts if part]
  valid = (
      len(fractions) == 3
      and all(f > 0 for f in fractions)
      and sum(fractions) <= 1 + 1e-9
  )
  if not valid:
    raise argparse.ArgumentTypeError(
        'Split fractions must be three positive numbers adding up to at most'
        f' 1. Fractions are currently {value}'
    )
  return tuple(fractions)


def channel_list_type(value):
  """Parse a comma separated list of channel column names or indices."""
  channels = tuple(part.strip() for part in value.split(',') if part.strip())
  if not channels:
    raise argparse.ArgumentTypeError('Channel list must not be empty.')
  return channels


def delimiter_type(value):
  if value == '\\t':
    return '\t'
  if len(value) != 1:
    raise argparse.ArgumentTypeError(
        f'Delimiter must be a single character. Delimiter is currently {value}'
    )
  return value


def file_path_type(value):
  if not os.path.isfile(value):
    raise argparse.ArgumentTypeError(
        f'File path is invalid. User provided path was {value}'
    )
  return value
