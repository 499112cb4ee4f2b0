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

import hashlib
import os

from .console import ask_for_user_consent, tps_print
from .execution_context import is_dry_run

_READ_CHUNK_BYTES = 1 << 20


def ensure_directory_exists(directory_path: str) -> None:
  """Checks if a directory exists and creates it if it doesn't.

  Args:
    directory_path: The path to the directory.
  """
  if directory_path and not is_dry_run() and not os.path.exists(directory_path):
    os.makedirs(directory_path)


def ensure_parent_directory(file_path: str) -> None:
  ensure_directory_exists(os.path.dirname(os.path.abspath(file_path)))


def confirm_overwrite(file_path: str) -> bool:
  """Asks before replacing an existing output file.

  Args:
    file_path: The output path that is about to be written.

  Returns:
    True if the file does not exist yet or the user agreed to replace it.
  """
  if not os.path.exists(file_path):
    return True
  return ask_for_user_consent(f'File {file_path} exists. Overwrite it?')


def sha256_file(file_path: str) -> str:
  """Returns the hex SHA-256 digest of a file's bytes."""
  digest = hashlib.sha256()
  with open(file_path, mode='rb') as f:
    for block in iter(lambda: f.read(_READ_CHUNK_BYTES), b''):
      digest.update(block)
  return digest.hexdigest()


def write_text_file(payload: str, file_path: str) -> str:
  """Writes `payload` to `file_path` with LF line endings.

  In dry-run mode the payload is printed instead.

  Args:
    payload: The string to be written to the file.
    file_path: Destination path.

  Returns:
    The destination path.
  """
  if is_dry_run():
    tps_print(f'File ({file_path}) content: \n{payload}')
    return file_path

  ensure_parent_directory(file_path)
  with open(file=file_path, mode='w', encoding='utf-8', newline='\n') as f:
    f.write(payload)
    f.flush()
  return file_path
