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

from dataclasses import dataclass


@dataclass
class _ExecutionContext:
  dry_run: bool = False
  quiet: bool = False
  threads: int | None = None


_context = _ExecutionContext()


def set_context(
    dry_run_value: bool, quiet_value: bool, threads_value: int | None = None
) -> None:
  """Sets the dry_run, quiet and worker thread cap for the current run."""
  _context.dry_run = dry_run_value
  _context.quiet = quiet_value
  _context.threads = threads_value


def is_dry_run() -> bool:
  """Dry runs validate inputs and print what would be written."""
  return _context.dry_run


def is_quiet() -> bool:
  """Quiet runs auto-accept prompts such as overwriting an output file."""
  return _context.quiet


def get_threads_override() -> int | None:
  """Returns the --threads value, or None when the flag was not given."""
  return _context.threads
