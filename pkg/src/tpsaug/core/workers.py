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
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterator, TypeVar

from ..utils.console import tps_print
from ..utils.execution_context import get_threads_override
from ..utils.objects import chunks
from .config import THREADS_KEY, get_int_setting
from .errors import ConfigError

THREADS_ENV = 'TPS_THREADS'
MAX_DEFAULT_THREADS = 8

T = TypeVar('T')


def get_thread_count() -> int:
  """Worker pool size: --threads, then TPS_THREADS, then config, then CPUs."""
  threads = get_threads_override()
  source = '--threads'
  if threads is None and os.getenv(THREADS_ENV, '') != '':
    source = THREADS_ENV
    try:
      threads = int(os.environ[THREADS_ENV])
    except ValueError as e:
      raise ConfigError(
          f'{THREADS_ENV}={os.environ[THREADS_ENV]!r} is not an integer.'
      ) from e
  if threads is None:
    source = f'config key {THREADS_KEY}'
    default = min(MAX_DEFAULT_THREADS, os.cpu_count() or 1)
    threads = get_int_setting(THREADS_KEY, default)
  if threads < 1:
    raise ConfigError(f'{source} must be at least 1, got {threads}.')
  return threads


def iter_tasks(
    tasks: list[Callable[[], T]],
    jobname: str,
    batch: int = 64,
    threads: int | None = None,
    progress: bool = True,
) -> Iterator[T]:
  """Runs tasks on a thread pool in groups of `batch`, yielding results in order.

  Args:
    tasks: zero-argument callables.
    jobname: name shown in progress lines.
    batch: number of tasks dispatched together.
    threads: pool size, defaults to get_thread_count().
    progress: print dispatch and completion lines.

  Yields:
    Task results in the order of `tasks`, independent of scheduling.
  """
  if not tasks:
    return
  threads = get_thread_count() if threads is None else threads
  batches = chunks(tasks, batch)
  if progress:
    tps_print(
        f'Breaking up a total of {len(tasks)} {jobname} tasks into'
        f' {len(batches)} batches on {threads} thread(s)'
    )
  if threads == 1:
    for task in tasks:
      yield task()
    return

  completed = 0
  start_time = datetime.datetime.now()
  with ThreadPoolExecutor(max_workers=threads) as pool:
    for i, group in enumerate(batches):
      if progress:
        tps_print(f'Dispatching batch {i}/{len(batches)}')
      futures = [pool.submit(task) for task in group]
      for future in futures:
        yield future.result()
      completed += len(group)
      if progress:
        seconds_elapsed = (datetime.datetime.now() - start_time).total_seconds()
        tps_print(
            f'[t={seconds_elapsed:.2f}, {jobname}] Completed'
            f' {completed}/{len(tasks)}'
        )


def run_tasks(
    tasks: list[Callable[[], T]],
    jobname: str,
    batch: int = 64,
    threads: int | None = None,
    progress: bool = True,
) -> list[T]:
  """Like iter_tasks, but collects every result into a list."""
  return list(iter_tasks(tasks, jobname, batch, threads, progress))
