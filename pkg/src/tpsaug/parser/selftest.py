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

from ..commands.selftest import selftest
from .common import add_shared_arguments
from .validators import positive_int_type, seed_type


def set_selftest_parser(selftest_parser: argparse.ArgumentParser):
  selftest_parser.add_argument(
      '--seed',
      type=seed_type,
      default=None,
      help='Seed of the randomized checks.',
  )
  selftest_parser.add_argument(
      '--trials',
      type=positive_int_type,
      default=None,
      help='Trials per randomized check, overriding each check default.',
  )
  selftest_parser.add_argument(
      '--only',
      type=str,
      nargs='+',
      default=None,
      help='Run only the named checks.',
  )
  add_shared_arguments(selftest_parser)
  selftest_parser.set_defaults(func=selftest)
