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

from ..core.errors import SELFTEST_FAILURE_EXIT_CODE
from ..core.oracles import ORACLES, run_oracles
from ..utils.console import print_table, tps_exit, tps_print
from .common import exit_on_error, resolve_seed


@exit_on_error
def selftest(args) -> None:
  """Runs the oracle checks and exits with 3 if any of them fails.

  Args:
    args: user provided arguments for running the command.
  """
  seed = resolve_seed(args)
  names = [name for name, _, _ in ORACLES]
  unknown = [name for name in args.only or [] if name not in names]
  if unknown:
    tps_print(f'Unknown checks {unknown}; choose from {names}.')
    tps_exit(1)

  tps_print(f'Running self checks with seed {seed}')
  results = run_oracles(seed=seed, trials=args.trials, only=args.only)
  print_table(
      'Self check results',
      [
          {
              'CHECK': r.name,
              'RESULT': 'PASS' if r.passed else 'FAIL',
              'CASES': r.trials,
              'DETAIL': r.detail,
          }
          for r in results
      ],
  )
  failed = [r.name for r in results if not r.passed]
  if failed:
    tps_print(f'{len(failed)} of {len(results)} checks failed: {failed}')
    tps_exit(SELFTEST_FAILURE_EXIT_CODE)
  tps_print(f'All {len(results)} checks passed')
  tps_exit(0)
