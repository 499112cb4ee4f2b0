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

CONFIG_ERROR_EXIT_CODE = 1
DATA_ERROR_EXIT_CODE = 2
SELFTEST_FAILURE_EXIT_CODE = 3


class TpsError(ValueError):
  """Base class for every error raised by the tpsaug library."""

  exit_code = CONFIG_ERROR_EXIT_CODE


class ConfigError(TpsError):
  """Invalid augmentation, sweep or run configuration."""


class DimensionError(TpsError):
  """Two arrays disagree on the size of a named axis."""

  def __init__(self, axis: str, expected: int, actual: int, context: str = ''):
    self.axis = axis
    self.expected = expected
    self.actual = actual
    where = f' in {context}' if context else ''
    super().__init__(
        f'Dimension mismatch on axis `{axis}`{where}: expected {expected},'
        f' got {actual}.'
    )


class BoundsError(TpsError):
  """An index or length falls outside its valid range."""


class GeometryError(TpsError):
  """Patch length / stride / series length combination is not usable."""


class ReconstructionError(TpsError):
  """A time index is not covered by any patch and nothing can fill it."""


class DegenerateVarianceError(TpsError):
  """Patch variance needs at least two values per patch (C * p > 1)."""


class PlanMismatchError(TpsError):
  """A shuffle plan does not fit the patch tensor it is applied to."""


class InterpolationError(TpsError):
  """A segment is too short to be linearly stretched."""


class EmptySampleError(TpsError):
  """A metric received an empty value sample or sequence."""


class DataError(TpsError):
  """Input data cannot be parsed or contains non-finite values."""

  exit_code = DATA_ERROR_EXIT_CODE

  def __init__(
      self, message: str, row: int | None = None, column: str | None = None
  ):
    self.row = row
    self.column = column
    location = []
    if row is not None:
      location.append(f'row {row}')
    if column is not None:
      location.append(f'column `{column}`')
    prefix = f'[{", ".join(location)}] ' if location else ''
    super().__init__(f'{prefix}{message}')
