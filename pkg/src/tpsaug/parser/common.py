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
from typing import Protocol, Any
from ..core.datasets import DATASET_PRESETS
from ..core.pipeline import Method
from ..core.tps import Level, Variant
import difflib
from argcomplete import ChoicesCompleter
from argparse import Action, ArgumentError
from .validators import (
    channel_list_type,
    delimiter_type,
    file_path_type,
    positive_int_type,
    ratio_type,
    seed_type,
    shuffle_rate_type,
    split_fractions_type,
)

_DEFAULT_DEST_ATTR_NAME = '_supplied_flags'


class ParserOrArgumentGroup(Protocol):

  def add_argument(self, *args, **kwargs) -> Any:
    ...


class ManyChoicesAction(Action):
  """An action class to output better error message for arguments with large lists of choices."""

  def __init__(self, *args, large_choice_list, **kwargs):
    self.large_list_of_choices = large_choice_list
    super().__init__(*args, **kwargs)

  def __call__(self, parser, namespace, value, option_string=None):
    if value not in self.large_list_of_choices:
      close_matches = difflib.get_close_matches(
          value, self.large_list_of_choices, n=5, cutoff=0
      )
      msg = (
          f"invalid choice: '{value}' (closest matches:"
          f" {', '.join(close_matches)})"
      )
      raise ArgumentError(self, msg)
    setattr(namespace, self.dest, value)


def add_many_choices_argument(
    parserOrGroup: ParserOrArgumentGroup,
    flag_name,
    choices: list[str],
    metavar: str,
    help_msg: str,
    required: bool = False,
) -> None:
  parserOrGroup.add_argument(
      flag_name,
      action=ManyChoicesAction,
      large_choice_list=choices,
      type=str,
      metavar=metavar,
      help=help_msg,
      required=required,
      default=None,
  ).completer = ChoicesCompleter(choices)


def add_shared_arguments(custom_parser_or_group: ParserOrArgumentGroup) -> None:
  """Add shared arguments to the parser or argument group.

  Args:
    custom_parser_or_group: parser or argument group to add shared arguments to.
  """
  custom_parser_or_group.add_argument(
      '--dry-run',
      type=bool,
      action=argparse.BooleanOptionalAction,
      default=False,
      help=(
          'If given `--dry-run`, tps will validate the inputs and print what'
          ' it would write, without writing any file.'
      ),
  )
  custom_parser_or_group.add_argument(
      '--quiet',
      type=bool,
      action=argparse.BooleanOptionalAction,
      default=False,
      help='Disables prompting before overwriting existing output files.',
  )
  custom_parser_or_group.add_argument(
      '--threads',
      type=positive_int_type,
      default=None,
      help=(
          'Worker pool size. Defaults to the TPS_THREADS environment variable,'
          ' then the `threads` config key, then the number of CPUs (at most'
          ' 8).'
      ),
  )


def add_dataset_arguments(
    custom_parser_or_group: ParserOrArgumentGroup, required: bool = True
) -> None:
  """Add the CSV dataset and windowing arguments.

  Args:
    custom_parser_or_group: parser or argument group to add the arguments to.
    required: whether --data, --t and --h must be given.
  """
  custom_parser_or_group.add_argument(
      '--data',
      type=file_path_type,
      default=None,
      help='CSV dataset with one header row.',
      required=required,
  )
  custom_parser_or_group.add_argument(
      '--channels',
      type=channel_list_type,
      default=(),
      help=(
          'Comma separated channel columns, by name or zero-based index.'
          ' Defaults to every column except the timestamp column.'
      ),
  )
  custom_parser_or_group.add_argument(
      '--timestamp-column',
      type=str,
      default=None,
      help='Column carried to the output as `timestamp`; never used in math.',
  )
  custom_parser_or_group.add_argument(
      '--delimiter',
      type=delimiter_type,
      default=None,
      help='Field separator. Defaults to the `delimiter` config key, then `,`.',
  )
  custom_parser_or_group.add_argument(
      '--t',
      type=positive_int_type,
      default=None,
      help='Look-back window length.',
      required=required,
  )
  custom_parser_or_group.add_argument(
      '--h',
      type=positive_int_type,
      default=None,
      help='Forecast horizon length.',
      required=required,
  )
  add_many_choices_argument(
      custom_parser_or_group,
      '--split-preset',
      choices=list(DATASET_PRESETS),
      metavar='PRESET',
      help_msg=(
          'Named (train, val, test) row counts, e.g. ETTh1 for (8545, 2881,'
          ' 2881).'
      ),
  )
  custom_parser_or_group.add_argument(
      '--split-fractions',
      type=split_fractions_type,
      default=None,
      help='Train, val and test fractions of the rows. Defaults to 0.7,0.1,0.2.',
  )
  custom_parser_or_group.add_argument(
      '--window-stride',
      type=positive_int_type,
      default=1,
      help='Step between consecutive window starts.',
  )
  custom_parser_or_group.add_argument(
      '--pass-through-constant',
      action=argparse.BooleanOptionalAction,
      default=False,
      help=(
          'Leave channels that are constant on the train split unscaled'
          ' instead of failing.'
      ),
  )


def add_augmentation_arguments(
    custom_parser_or_group: ParserOrArgumentGroup,
    include_tps_parameters: bool = True,
) -> None:
  """Add the augmentation method arguments.

  Args:
    custom_parser_or_group: parser or argument group to add the arguments to.
    include_tps_parameters: whether to add --p, --s and --alpha.
  """
  custom_parser_or_group.add_argument(
      '--method',
      type=str,
      choices=[m.value for m in Method],
      default=Method.TPS.value,
      help='Augmentation method: Temporal Patch Shuffle or the Upsample baseline.',
  )
  if include_tps_parameters:
    custom_parser_or_group.add_argument(
        '--p', type=positive_int_type, default=None, help='Patch length.'
    )
    custom_parser_or_group.add_argument(
        '--s',
        type=positive_int_type,
        default=None,
        help='Stride between patch starts.',
    )
    custom_parser_or_group.add_argument(
        '--alpha',
        type=shuffle_rate_type,
        default=None,
        help='Fraction of patches, lowest variance first, that is shuffled.',
    )
  custom_parser_or_group.add_argument(
      '--variant',
      type=str,
      choices=[v.value for v in Variant],
      default=Variant.STANDARD.value,
      help='Pipeline variant to run.',
  )
  custom_parser_or_group.add_argument(
      '--level',
      type=str,
      choices=[level.value for level in Level],
      default=Level.BATCH.value,
      help=(
          'Key randomness per batch element (batch-level) or per window'
          ' (sample-level, independent of batch grouping).'
      ),
  )
  custom_parser_or_group.add_argument(
      '--segment-rate',
      type=shuffle_rate_type,
      default=0.5,
      help='Fraction of the window kept and stretched by the upsample method.',
  )
  custom_parser_or_group.add_argument(
      '--seed',
      type=seed_type,
      default=None,
      help='Master seed. Defaults to the `default-seed` config key, then 0.',
  )
  custom_parser_or_group.add_argument(
      '--size',
      type=positive_int_type,
      default=1,
      help='Number of synthetic replicas generated per original batch.',
  )
  custom_parser_or_group.add_argument(
      '--ratio',
      type=ratio_type,
      default=1.0,
      help='Fraction of each replica kept in every training batch.',
  )
  custom_parser_or_group.add_argument(
      '--batch-size',
      type=positive_int_type,
      default=None,
      help='Windows per batch. Defaults to the `batch-size` config key, then 32.',
  )


def add_max_windows_argument(
    custom_parser_or_group: ParserOrArgumentGroup,
) -> None:
  custom_parser_or_group.add_argument(
      '--max-windows',
      type=positive_int_type,
      default=None,
      help='Use at most this many evenly spaced windows per split.',
  )


def extract_command_path(parser: argparse.ArgumentParser, args):
  """
  Reconstructs the command path (e.g. 'config set').
  """

  def _get_path_segments(current_parser):
    subparser_action = next(
        (
            action
            for action in current_parser._actions  # pylint: disable=protected-access
            if isinstance(action, argparse._SubParsersAction)  # pylint: disable=protected-access
        ),
        None,
    )

    if subparser_action is None:
      return []

    chosen_command = getattr(args, subparser_action.dest, None)

    if chosen_command is None:
      return []

    if chosen_command in subparser_action.choices:
      next_parser = subparser_action.choices[chosen_command]
      return [chosen_command] + _get_path_segments(next_parser)

    return [chosen_command]

  return ' '.join(_get_path_segments(parser))


def enable_flags_usage_tracking(
    parser: argparse.ArgumentParser, dest_attr: str = _DEFAULT_DEST_ATTR_NAME
):
  """
  Dynamically modifies the parser's actions to record when they are used.
  Records the canonical flag name in the `args._supplied_flags` set.
  """

  def get_instrumented_class(original_class):
    class InstrumentedAction(original_class):
      """Instrumented action to record flag usage."""

      def __call__(self, parser, namespace, values, option_string=None):
        if not hasattr(namespace, dest_attr):
          setattr(namespace, dest_attr, set())

        if self.option_strings:
          canonical_option_string = max(self.option_strings, key=len)
          getattr(namespace, dest_attr).add(canonical_option_string)

        previous_flags = getattr(namespace, dest_attr, set()).copy()

        super().__call__(parser, namespace, values, option_string)

        getattr(namespace, dest_attr, set()).update(previous_flags)

    InstrumentedAction.__name__ = f'Instrumented{original_class.__name__}'
    return InstrumentedAction

  for action in parser._actions:  # pylint: disable=protected-access
    if isinstance(action, (argparse._HelpAction, argparse._VersionAction)):  # pylint: disable=protected-access
      continue

    if not action.__class__.__name__.startswith('Instrumented'):
      action.__class__ = get_instrumented_class(action.__class__)

    if isinstance(action, argparse._SubParsersAction):  # pylint: disable=protected-access
      for sub_parser in action.choices.values():
        enable_flags_usage_tracking(sub_parser, dest_attr)


def retrieve_flags(
    args: argparse.Namespace, dest_attr: str = _DEFAULT_DEST_ATTR_NAME
) -> str:
  """
  Retrieves the list of used flags, strips leading dashes,
  and returns them as a sorted, space-separated string.
  Example: {'--seed', '--p'} -> "p seed"
  """
  supplied: set[str] = getattr(args, dest_attr, set())
  normalized = (flag.lstrip('-') for flag in supplied)
  return ' '.join(sorted(normalized))
