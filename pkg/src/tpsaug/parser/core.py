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
import sys
from typing import NoReturn

from .config import set_config_parsers

from ..core.errors import CONFIG_ERROR_EXIT_CODE
from ..utils.console import tps_print
from .augment import set_augment_parser
from .report import set_report_parser
from .selftest import set_selftest_parser
from .sweep import set_sweep_parser
from .version import set_version_parser


class TpsArgumentParser(argparse.ArgumentParser):
  """Argument parser whose usage errors exit with the config error code.

  Subparsers inherit the class, so a malformed flag on any subcommand exits 1.
  """

  def error(self, message: str) -> NoReturn:
    self.print_usage(sys.stderr)
    tps_print(f"{self.prog}: error: {message}")
    sys.exit(CONFIG_ERROR_EXIT_CODE)


def create_parser() -> TpsArgumentParser:
  """The top level `tps` parser with every subcommand registered."""
  parser = TpsArgumentParser(description="tps command", prog="tps")
  set_parser(parser=parser)
  return parser


def set_parser(parser: argparse.ArgumentParser):
  tps_subcommands = parser.add_subparsers(
      title="tps subcommands", dest="tps_subcommands", help="Top level commands"
  )
  augment_parser = tps_subcommands.add_parser(
      "augment",
      help="Write original and synthetic windows of a dataset split to CSV.",
  )
  sweep_parser = tps_subcommands.add_parser(
      "sweep",
      help="Rank (p, s, alpha) candidates by validation MSE of a scorer.",
  )
  report_parser = tps_subcommands.add_parser(
      "report",
      help="Distribution-shift, point and probabilistic metric reports.",
  )
  selftest_parser = tps_subcommands.add_parser(
      "selftest", help="Run the built-in oracle checks."
  )
  version_parser = tps_subcommands.add_parser(
      "version", help="Command to get tps version"
  )
  config_parser = tps_subcommands.add_parser(
      "config", help="Commands to set and retrieve values from tps config."
  )

  def default_subcommand_function(
      _args,
  ) -> int:  # args is unused, so pylint: disable=invalid-name
    """Default subcommand function.

    Args:
      _args: user provided arguments for running the command.

    Returns:
      0 if successful and 1 otherwise.
    """
    tps_print("Welcome to TPS! See below for overall commands:", flush=True)
    parser.print_help()
    augment_parser.print_help()
    sweep_parser.print_help()
    report_parser.print_help()
    selftest_parser.print_help()
    version_parser.print_help()
    config_parser.print_help()
    return 0

  parser.set_defaults(func=default_subcommand_function)
  config_parser.set_defaults(func=default_subcommand_function)

  set_augment_parser(augment_parser=augment_parser)
  set_sweep_parser(sweep_parser=sweep_parser)
  set_report_parser(report_parser=report_parser)
  set_selftest_parser(selftest_parser=selftest_parser)
  set_version_parser(version_parser=version_parser)
  set_config_parsers(config_parser=config_parser)
