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

import os

import numpy as np
import pytest
from pytest_mock import MockerFixture

from ..core.datasets import LabelledBatch, Role, read_augmented
from ..core.manifest import load_manifest, manifest_path
from ..core.series import SeriesBatch, split_time
from ..core.testing.command_runner import CommandRunner, write_dataset
from .augment import _RoleSummary


@pytest.fixture
def runner(mocker: MockerFixture) -> CommandRunner:
  return CommandRunner(mocker)


@pytest.fixture
def data(tmp_path) -> str:
  return write_dataset(str(tmp_path / 'data.csv'), rows=200, channels=2)


def _augment(runner: CommandRunner, data: str, out: str, *extra, threads=1):
  return runner.run(
      'augment',
      f'--data={data}',
      '--timestamp-column=date',
      '--t=24',
      '--h=8',
      '--p=8',
      '--s=2',
      '--alpha=0.8',
      '--seed=7',
      '--size=2',
      '--ratio=0.5',
      '--batch-size=16',
      f'--out={out}',
      *extra,
      threads=threads,
  )


def test_augment_writes_windows_and_manifest(runner, data, tmp_path):
  out = str(tmp_path / 'out.csv')

  assert _augment(runner, data, out) == 0

  windows = read_augmented(out)
  # 140 train rows hold 109 windows; each batch keeps half of two replicas
  assert windows.roles.count(Role.ORIGINAL) == 109
  assert windows.roles.count(Role.SYNTHETIC) == 2 * (6 * 8 + 6)
  manifest = load_manifest(manifest_path(out))
  assert manifest.command == 'augment'
  assert manifest.seed == 7
  assert manifest.summary['windows'] == len(windows.roles)
  assert 'seed' in manifest.settings['supplied_flags'].split()
  runner.assert_printed('Augmentation summary')
  runner.assert_printed('Exiting TPS cleanly')


def test_augment_output_carries_timestamps(runner, data, tmp_path):
  out = tmp_path / 'out.csv'

  _augment(runner, data, str(out))

  header, first = out.read_text(encoding='utf-8').splitlines()[:2]
  assert header == 'window_id,role,source,step,timestamp,c0,c1'
  assert first.split(',')[4] == '2016-07-01 00:00:00'


def test_augment_is_byte_identical_across_runs_and_threads(
    runner, data, tmp_path
):
  outputs = []
  for i, threads in enumerate((1, 1, 4, 8)):
    out = tmp_path / f'out-{i}.csv'
    assert _augment(runner, data, str(out), threads=threads) == 0
    outputs.append(out.read_bytes())

  assert all(output == outputs[0] for output in outputs[1:])


def test_augment_dry_run_writes_nothing(runner, data, tmp_path):
  out = tmp_path / 'out.csv'

  code = runner.run(
      'augment',
      f'--data={data}',
      '--timestamp-column=date',
      '--t=24',
      '--h=8',
      '--p=8',
      '--s=2',
      '--alpha=0.8',
      f'--out={out}',
      dry_run=True,
  )

  assert code == 0
  assert not out.exists()
  assert not os.path.exists(manifest_path(str(out)))


def test_augment_with_upsample(runner, data, tmp_path):
  out = str(tmp_path / 'out.csv')

  code = runner.run(
      'augment',
      f'--data={data}',
      '--timestamp-column=date',
      '--t=24',
      '--h=8',
      '--method=upsample',
      '--segment-rate=0.5',
      f'--out={out}',
  )

  assert code == 0
  assert read_augmented(out).roles.count(Role.SYNTHETIC) == 109


def test_augment_split_without_windows(runner, data, tmp_path):
  out = tmp_path / 'out.csv'

  code = runner.run(
      'augment',
      f'--data={data}',
      '--timestamp-column=date',
      '--t=24',
      '--h=8',
      '--method=upsample',
      '--split=val',
      f'--out={out}',
  )

  # 20 val rows cannot hold a window of 32 steps
  assert code == 1
  assert not out.exists()
  runner.assert_printed('holds no window')


def test_augment_bad_value_exits_with_data_error(runner, tmp_path):
  data = tmp_path / 'data.csv'
  data.write_text('a\n1\n2\nabc\n', encoding='utf-8')

  code = runner.run(
      'augment',
      f'--data={data}',
      '--t=1',
      '--h=1',
      '--p=2',
      '--s=1',
      '--alpha=1.0',
      f'--out={tmp_path / "out.csv"}',
  )

  assert code == 2
  runner.assert_printed('row 3, column `a`')


def test_augment_patch_longer_than_window_is_a_config_error(
    runner, data, tmp_path
):
  code = runner.run(
      'augment',
      f'--data={data}',
      '--timestamp-column=date',
      '--t=24',
      '--h=8',
      '--p=40',
      '--s=2',
      '--alpha=1.0',
      f'--out={tmp_path / "out.csv"}',
  )

  assert code == 1


def test_augment_tps_needs_patch_parameters(runner, data, tmp_path):
  code = runner.run(
      'augment',
      f'--data={data}',
      '--timestamp-column=date',
      '--t=24',
      '--h=8',
      '--p=8',
      f'--out={tmp_path / "out.csv"}',
  )

  assert code == 1
  runner.assert_printed('--s, --alpha')


def test_augment_refuses_to_overwrite(
    runner, data, tmp_path, mocker: MockerFixture
):
  mocker.patch('tpsaug.utils.file.ask_for_user_consent', return_value=False)
  out = tmp_path / 'out.csv'
  out.write_text('keep me', encoding='utf-8')

  code = runner.run(
      'augment',
      f'--data={data}',
      '--timestamp-column=date',
      '--t=24',
      '--h=8',
      '--p=8',
      '--s=2',
      '--alpha=0.8',
      f'--out={out}',
      quiet=False,
  )

  assert code == 1
  assert out.read_text(encoding='utf-8') == 'keep me'


def test_role_summary_std_survives_a_large_offset():
  rng = np.random.default_rng(4)
  values = 1e9 + rng.normal(scale=1e-3, size=(6, 32, 2))
  batches = [
      LabelledBatch(
          pair=split_time(SeriesBatch(values[i : i + 2]), 24),
          role=Role.ORIGINAL,
          window_ids=np.arange(i, i + 2),
          sources=np.arange(i, i + 2),
          offsets=np.arange(i, i + 2),
      )
      for i in range(0, 6, 2)
  ]
  summary = _RoleSummary()

  assert len(list(summary.track(batches))) == 3

  original, synthetic = summary.rows()
  assert original['WINDOWS'] == 6
  assert float(original['MEAN']) == pytest.approx(1e9)
  assert float(original['STD']) == pytest.approx(
      np.std(values - 1e9, ddof=1), rel=1e-4
  )
  assert synthetic == {
      'ROLE': Role.SYNTHETIC.value,
      'WINDOWS': 0,
      'MEAN': '0',
      'STD': '0',
  }
