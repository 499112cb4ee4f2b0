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

import numpy as np
import pytest
from pytest_mock import MockerFixture

from .datasets import (
    DATASET_PRESETS,
    ChannelStats,
    DatasetSpec,
    LabelledBatch,
    Role,
    SplitSizes,
    destandardize,
    fit_stats,
    gather_windows,
    load_csv,
    load_table,
    read_augmented,
    read_matrix,
    resolve_split_sizes,
    split_standardize,
    standardize,
    window_batches,
    window_count,
    write_augmented,
)
from .errors import ConfigError, DataError
from .series import SeriesBatch, split_time


def _write(tmp_path, text: str, name: str = 'data.csv') -> str:
  path = tmp_path / name
  path.write_text(text, encoding='utf-8')
  return str(path)


def _labelled(values, role=Role.ORIGINAL, ids=None, sources=None, t=2):
  x = SeriesBatch(np.asarray(values, dtype=np.float64))
  n = x.batch_size
  return LabelledBatch(
      pair=split_time(x, t),
      role=role,
      window_ids=np.arange(n) if ids is None else np.asarray(ids),
      sources=np.arange(n) if sources is None else np.asarray(sources),
  )


def test_load_csv_keeps_file_order(tmp_path):
  path = _write(tmp_path, 'a\n1\n3\n2\n')

  x = load_csv(DatasetSpec(path=path, t=1, h=1))

  assert x.shape == (1, 3, 1)
  assert x.data[0, :, 0].tolist() == [1.0, 3.0, 2.0]


def test_load_table_selects_channels_and_timestamps(tmp_path):
  path = _write(tmp_path, 'date,a,b,c\nd0,1,2,3\nd1,4,5,6\n')
  spec = DatasetSpec(
      path=path, t=1, h=1, channels=('c', '1'), timestamp_column='date'
  )

  table = load_table(spec)

  assert table.channel_names == ('c', 'a')
  assert table.timestamps == ('d0', 'd1')
  assert table.series.data[0].tolist() == [[3.0, 1.0], [6.0, 4.0]]


def test_load_table_defaults_to_every_non_timestamp_column(tmp_path):
  path = _write(tmp_path, 'date;a;b\nd0;1;2\n')

  table = load_table(
      DatasetSpec(path=path, t=1, h=1, timestamp_column='date', delimiter=';')
  )

  assert table.channel_names == ('a', 'b')


def test_header_only_file_is_a_data_error(tmp_path):
  path = _write(tmp_path, 'a,b\n')

  with pytest.raises(DataError, match='no data rows'):
    load_csv(DatasetSpec(path=path, t=1, h=1))


def test_missing_file_is_a_data_error(tmp_path):
  with pytest.raises(DataError, match='does not exist'):
    load_csv(DatasetSpec(path=str(tmp_path / 'missing.csv'), t=1, h=1))


def test_non_finite_value_names_row_and_column(tmp_path):
  path = _write(tmp_path, 'a,b\n1,2\n3,NaN\n')

  with pytest.raises(DataError, match=r'row 2, column `b`.*non-finite') as e:
    load_csv(DatasetSpec(path=path, t=1, h=1))
  assert e.value.row == 2
  assert e.value.exit_code == 2


def test_unparseable_value_names_row_and_column(tmp_path):
  path = _write(tmp_path, 'a\n1\n2\nabc\n')

  with pytest.raises(DataError, match=r'row 3, column `a`.*cannot parse'):
    load_csv(DatasetSpec(path=path, t=1, h=1))


def test_unknown_channel_is_a_config_error(tmp_path):
  path = _write(tmp_path, 'a\n1\n')

  with pytest.raises(ConfigError):
    load_table(DatasetSpec(path=path, t=1, h=1, channels=('z',)))


def test_standardization_uses_train_statistics(tmp_path):
  # train [8, 12] has mean 10 and population std 2
  path = _write(tmp_path, 'a\n8\n12\n14\n10\n')
  spec = DatasetSpec(path=path, t=1, h=1, split_sizes=SplitSizes(2, 1, 1))

  splits = split_standardize(load_csv(spec), spec)

  assert splits.stats.mean.tolist() == [10.0]
  assert splits.stats.std.tolist() == [2.0]
  assert splits.val.data[0, 0, 0] == 2.0
  assert splits.test.data[0, 0, 0] == 0.0
  assert splits.offset('val') == 2 and splits.offset('test') == 3


def test_constant_train_channel_is_a_data_error():
  train = SeriesBatch(np.array([[[1.0, 5.0], [2.0, 5.0]]]))

  with pytest.raises(DataError, match='column `b`'):
    fit_stats(train, channel_names=('a', 'b'))


def test_constant_train_channel_can_pass_through():
  train = SeriesBatch(np.array([[[1.0, 5.0], [3.0, 5.0]]]))

  stats = fit_stats(train, pass_through_constant=True)

  assert stats.passthrough == (1,)
  assert standardize(train, stats).data[0, :, 1].tolist() == [5.0, 5.0]


def test_destandardize_inverts_standardize():
  x = SeriesBatch(np.random.default_rng(0).normal(size=(1, 30, 3)) * 7 + 2)
  stats = ChannelStats(np.array([1.0, -2.0, 0.5]), np.array([3.0, 0.5, 2.0]))

  back = destandardize(standardize(x, stats), stats)

  np.testing.assert_allclose(back.data, x.data, rtol=0, atol=1e-12)


def test_default_split_fractions():
  spec = DatasetSpec(path='unused.csv', t=1, h=1)

  assert resolve_split_sizes(spec, 10) == SplitSizes(7, 1, 2)


def test_preset_longer_than_file_is_a_data_error():
  spec = DatasetSpec(
      path='unused.csv', t=1, h=1, split_sizes=DATASET_PRESETS['ETTh1']
  )

  with pytest.raises(DataError, match='need 14307 rows'):
    resolve_split_sizes(spec, 100)


def test_too_few_rows_for_fractions_is_a_data_error():
  spec = DatasetSpec(path='unused.csv', t=1, h=1)

  with pytest.raises(DataError):
    resolve_split_sizes(spec, 4)


@pytest.mark.parametrize(
    'kwargs',
    [
        {'t': 0, 'h': 1},
        {'t': 1, 'h': 0},
        {'t': 1, 'h': 1, 'window_stride': 0},
        {'t': 1, 'h': 1, 'split_fractions': (0.8, 0.2, 0.2)},
        {'t': 1, 'h': 1, 'split_fractions': (0.8, 0.0, 0.2)},
        {
            't': 1,
            'h': 1,
            'split_fractions': (0.7, 0.1, 0.2),
            'split_sizes': SplitSizes(2, 1, 1),
        },
    ],
)
def test_invalid_dataset_spec(kwargs):
  with pytest.raises(ConfigError):
    DatasetSpec(path='unused.csv', **kwargs)


@pytest.mark.parametrize(
    'length,t,h,stride,expected',
    [(10, 3, 2, 1, 6), (10, 3, 2, 2, 3), (5, 3, 2, 1, 1), (4, 3, 2, 1, 0)],
)
def test_window_count(length, t, h, stride, expected):
  assert window_count(length, t, h, stride) == expected


def test_window_batches_cover_every_window_once():
  split = SeriesBatch(np.arange(12.0).reshape(1, 12, 1))

  batches = list(window_batches(split, 3, 2, batch_size=3))

  assert [b.batch_size for b in batches] == [3, 3, 2]
  firsts = np.concatenate([b.lookback.data[:, 0, 0] for b in batches])
  assert firsts.tolist() == list(range(8))
  assert batches[0].horizon.data[1, :, 0].tolist() == [4.0, 5.0]


def test_gather_windows_with_stride():
  split = SeriesBatch(np.arange(10.0).reshape(1, 10, 1))

  pair = gather_windows(split, 2, 1, [0, 4, 7])

  assert pair.lookback.data[:, :, 0].tolist() == [[0, 1], [4, 5], [7, 8]]
  assert pair.horizon.data[:, 0, 0].tolist() == [2, 6, 9]


def test_write_then_read_is_bit_exact(tmp_path):
  values = np.random.default_rng(1).normal(size=(3, 5, 2)) * 1e-7
  path = str(tmp_path / 'out.csv')
  original = _labelled(values)
  synthetic = _labelled(
      values[:2] + 1.0, role=Role.SYNTHETIC, ids=[3, 4], sources=[0, 2]
  )

  written = write_augmented([original, synthetic], path, channels=2)
  back = read_augmented(path)

  assert written == 5
  assert back.window_ids.tolist() == [0, 1, 2, 3, 4]
  assert back.roles == (Role.ORIGINAL,) * 3 + (Role.SYNTHETIC,) * 2
  assert back.sources.tolist() == [0, 1, 2, 0, 2]
  assert np.array_equal(back.values[:3], values)
  assert np.array_equal(back.values[3:], values[:2] + 1.0)


def test_written_rows_use_lf_and_full_precision(tmp_path):
  path = str(tmp_path / 'out.csv')

  write_augmented([_labelled([[[0.1], [1.0], [2.5]]])], path, channels=1)

  with open(path, 'rb') as f:
    lines = f.read().split(b'\n')
  assert lines[0] == b'window_id,role,source,step,c0'
  assert lines[1] == b'0,original,0,0,0.10000000000000001'
  assert lines[2] == b'0,original,0,1,1'
  assert b'\r' not in b''.join(lines)


def test_empty_stream_writes_header_only(tmp_path):
  path = str(tmp_path / 'out.csv')

  written = write_augmented([], path, channels=2)

  assert written == 0
  with open(path, encoding='utf-8') as f:
    assert f.read() == 'window_id,role,source,step,c0,c1\n'
  assert read_augmented(path).values.shape[0] == 0


def test_timestamps_follow_window_offsets(tmp_path):
  path = str(tmp_path / 'out.csv')
  batch = LabelledBatch(
      pair=split_time(SeriesBatch(np.zeros((1, 3, 1))), 2),
      role=Role.ORIGINAL,
      window_ids=np.array([0]),
      sources=np.array([0]),
      offsets=np.array([2]),
  )

  write_augmented([batch], path, 1, timestamps=['t0', 't1', 't2', 't3', 't4'])

  with open(path, encoding='utf-8') as f:
    lines = f.read().splitlines()
  assert lines[0] == 'window_id,role,source,step,timestamp,c0'
  assert [line.split(',')[4] for line in lines[1:]] == ['t2', 't3', 't4']


def test_dry_run_writes_nothing(tmp_path, mocker: MockerFixture):
  mocker.patch('tpsaug.core.datasets.is_dry_run', return_value=True)
  path = tmp_path / 'out.csv'

  written = write_augmented([_labelled(np.zeros((2, 4, 1)))], str(path), 1)

  assert written == 2
  assert not path.exists()


def test_aligned_pairs_match_synthetic_to_source(tmp_path):
  values = np.arange(3 * 4, dtype=np.float64).reshape(3, 4, 1)
  path = str(tmp_path / 'out.csv')
  write_augmented(
      [
          _labelled(values),
          _labelled(
              -values[[2, 0]], role=Role.SYNTHETIC, ids=[3, 4], sources=[2, 0]
          ),
      ],
      path,
      channels=1,
  )

  original, synthetic = read_augmented(path).aligned_pairs()

  assert np.array_equal(original.data, values[[2, 0]])
  assert np.array_equal(synthetic.data, -values[[2, 0]])


def test_aligned_pairs_need_the_source_window(tmp_path):
  path = str(tmp_path / 'out.csv')
  write_augmented(
      [
          _labelled(np.zeros((1, 4, 1))),
          _labelled(
              np.ones((1, 4, 1)), role=Role.SYNTHETIC, ids=[1], sources=[7]
          ),
      ],
      path,
      channels=1,
  )

  with pytest.raises(DataError, match='source 7'):
    read_augmented(path).aligned_pairs()


def test_read_augmented_rejects_partial_windows(tmp_path):
  path = _write(
      tmp_path,
      'window_id,role,source,step,c0\n0,original,0,0,1\n0,original,0,1,2\n'
      '1,original,1,0,3\n',
  )

  with pytest.raises(DataError, match='whole windows'):
    read_augmented(path)


def test_read_matrix(tmp_path):
  path = _write(tmp_path, 'x,y\n1,2\n3,4.5\n')

  assert read_matrix(path).tolist() == [[1.0, 2.0], [3.0, 4.5]]
