# Copyright 2026 The phlat Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ==============================================================================

"""Static limits and process-level configuration.

Limits are plain tables so they can be imported as defaults by the library
and overridden per call. The census cache root is read from the environment.
"""

import os
import types


class ExitCode:
  OK = 0
  USAGE = 1
  LIMIT = 2
  INVALID_INPUT = 3


LIMITS = types.MappingProxyType({
    # Orbit searches over S_n.
    'max_ph_n': 8,
    # Invariant lattices enumerate 2^n column subsets.
    'max_lattice_n': 12,
    'max_census_n': 6,
    # Matrix-permutation products allowed in one census.
    'census_budget': 2_000_000,
    # Prime powers up to this are counted directly for S((132)).
    's132_max_prime_power': 500,
    'factor_limit': 10**12,
    # Exhaustive isomorphism search on J(B).
    'aut_order_limit': 10**4,
    'aut_candidate_limit': 200_000,
    # Column spaces visited by an orbit lab census.
    'orbit_budget': 250_000,
    'mc_max_n': 5,
})

# Euler products are truncated at this prime and evaluated at this many
# decimal digits.
DEFAULT_P_MAX = 100_000
MP_DPS = 60

CACHE_ENV_VAR = 'PHLAT_CACHE'
CACHE_FORMAT_VERSION = 1
_DEFAULT_CACHE_ROOT = os.path.join('~', '.cache', 'phlat')


def cache_root() -> str:
  """Returns the census cache root, honouring `PHLAT_CACHE`."""
  root = os.environ.get(CACHE_ENV_VAR) or _DEFAULT_CACHE_ROOT
  return os.path.expanduser(root)


def census_path(n: int, d: int) -> str:
  return os.path.join(cache_root(), 'census', f'n{n}_d{d}.jsonl')
