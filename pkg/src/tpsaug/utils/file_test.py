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

from pytest_mock import MockerFixture

from .file import confirm_overwrite, sha256_file, write_text_file


def test_write_text_file_creates_parent_and_uses_lf(tmp_path):
  path = tmp_path / 'nested' / 'out.json'

  write_text_file('{\n}\n', str(path))

  assert path.read_bytes() == b'{\n}\n'


def test_write_text_file_dry_run_prints(tmp_path, mocker: MockerFixture):
  mocker.patch('tpsaug.utils.file.is_dry_run', return_value=True)
  mock_print = mocker.patch('tpsaug.utils.file.tps_print')
  path = tmp_path / 'out.json'

  write_text_file('payload', str(path))

  assert not path.exists()
  assert 'payload' in mock_print.call_args.args[0]


def test_sha256_file(tmp_path):
  path = tmp_path / 'data.csv'
  path.write_bytes(b'a\n1\n')

  assert sha256_file(str(path)) == hashlib.sha256(b'a\n1\n').hexdigest()


def test_confirm_overwrite_new_file(tmp_path, mocker: MockerFixture):
  ask = mocker.patch('tpsaug.utils.file.ask_for_user_consent')

  assert confirm_overwrite(str(tmp_path / 'new.csv'))
  ask.assert_not_called()


def test_confirm_overwrite_existing_file(tmp_path, mocker: MockerFixture):
  ask = mocker.patch(
      'tpsaug.utils.file.ask_for_user_consent', return_value=False
  )
  path = tmp_path / 'old.csv'
  path.write_text('x', encoding='utf-8')

  assert not confirm_overwrite(str(path))
  ask.assert_called_once()
