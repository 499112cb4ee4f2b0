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

import datetime
import io
import os
from dataclasses import asdict, dataclass, field

import ruamel.yaml

from ..utils.console import tps_print
from ..utils.execution_context import is_dry_run
from ..utils.file import sha256_file, write_text_file
from .config import TPS_CURRENT_VERSION
from .errors import DataError

MANIFEST_SUFFIX = '.manifest.yaml'

yaml = ruamel.yaml.YAML()
yaml.default_flow_style = False


@dataclass
class FileRecord:
  path: str
  sha256: str


@dataclass
class RunManifest:
  """What is needed to repeat a run: command line, seed, inputs and outputs."""

  command: str
  argv: list[str]
  settings: dict
  seed: int | None = None
  version: str = TPS_CURRENT_VERSION
  inputs: list[FileRecord] = field(default_factory=list)
  outputs: list[FileRecord] = field(default_factory=list)
  timings: dict[str, str | float] = field(default_factory=dict)
  summary: dict = field(default_factory=dict)
  _started: datetime.datetime | None = field(default=None, repr=False)

  def start(self) -> None:
    self._started = datetime.datetime.now(datetime.timezone.utc)
    self.timings['started'] = self._started.isoformat()

  def finish(self) -> None:
    finished = datetime.datetime.now(datetime.timezone.utc)
    self.timings['finished'] = finished.isoformat()
    if self._started is not None:
      self.timings['seconds'] = round(
          (finished - self._started).total_seconds(), 3
      )

  def add_input(self, path: str) -> None:
    self.inputs.append(FileRecord(os.path.abspath(path), sha256_file(path)))

  def add_output(self, path: str) -> None:
    digest = '' if is_dry_run() else sha256_file(path)
    self.outputs.append(FileRecord(os.path.abspath(path), digest))

  def as_dict(self) -> dict:
    payload = asdict(self)
    payload.pop('_started')
    return payload

  def to_yaml(self) -> str:
    stream = io.StringIO()
    yaml.dump(self.as_dict(), stream)
    return stream.getvalue()


def manifest_path(output_path: str) -> str:
  return output_path + MANIFEST_SUFFIX


def write_manifest(manifest: RunManifest, output_path: str) -> str:
  """Writes the manifest next to `output_path` and returns its path."""
  path = manifest_path(output_path)
  write_text_file(manifest.to_yaml(), path)
  if not is_dry_run():
    tps_print(f'Run manifest written to {path}')
  return path


def load_manifest(path: str) -> RunManifest:
  try:
    with open(path, encoding='utf-8', mode='r') as stream:
      payload = yaml.load(stream)
  except OSError as e:
    raise DataError(f'Cannot read manifest {path}: {e}') from e
  try:
    return RunManifest(
        command=str(payload['command']),
        argv=[str(a) for a in payload['argv']],
        settings=dict(payload.get('settings') or {}),
        seed=payload.get('seed'),
        version=str(payload.get('version', '')),
        inputs=[FileRecord(**r) for r in payload.get('inputs') or []],
        outputs=[FileRecord(**r) for r in payload.get('outputs') or []],
        timings=dict(payload.get('timings') or {}),
        summary=dict(payload.get('summary') or {}),
    )
  except (KeyError, TypeError) as e:
    raise DataError(f'Manifest {path} is malformed: {e}') from e
