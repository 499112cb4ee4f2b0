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

from ..core.config import (
    BATCH_SIZE_KEY,
    DEFAULT_SEED_KEY,
    DELIMITER_KEY,
    THREADS_KEY,
    get_config as get_tps_config,
)
from ..core.errors import ConfigError
from ..parser.validators import delimiter_type, positive_int_type, seed_type
from ..utils.console import tps_exit, tps_print
from .common import exit_on_error

_VALUE_TYPES = {
    DEFAULT_SEED_KEY: seed_type,
    THREADS_KEY: positive_int_type,
    BATCH_SIZE_KEY: positive_int_type,
    DELIMITER_KEY: delimiter_type,
}


@exit_on_error
def set_config(args) -> None:
  """Stores one config value after checking it like the matching flag."""
  key, value = args.config_key, args.config_value
  value_type = _VALUE_TYPES.get(key)
  if value_type is not None:
    try:
      value = str(value_type(value))
    except argparse.ArgumentTypeError as e:
      raise ConfigError(f'Config key {key}: {e}') from e
  get_tps_config().set(key, value)
  tps_print(f'{key} set to {value!r}')
  tps_exit(0)


@exit_on_error
def get_config(args) -> None:
  value = get_tps_config().get(args.config_key)
  if value is None:
    tps_print(f'{args.config_key} is not set')
  else:
    tps_print(f'{args.config_key}: {value}')
  tps_exit(0)
