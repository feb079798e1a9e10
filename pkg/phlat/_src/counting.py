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

"""Counting permutation-Hermite classes of fixed determinant.

Currently implements the following:
- Multiplicative arithmetic functions and their Dirichlet convolution
- Fixed-point counts S(π)(d) of the column action on weakly terminal matrices
- The Burnside census over `S_n`, the ground truth for every formula here
- Exact class counts for 3×3 matrices, split by 1-block size

Weakly terminal matrices of determinant d are the Hermite forms of the NS
matrices; `S_n` acts on them by `C ↦ HNF(C·P)` and the orbits are exactly the
PH-equivalence classes.

"""
# pylint: disable=invalid-name

import collections
import fractions
import functools
import itertools
import json
import math
import os
from typing import (Callable, Dict, Iterator, List, Mapping, Optional,
                    Sequence, Tuple)

from absl import logging
import attr
from phlat._src import errors
from phlat._src import exact_linalg
from phlat._src import settings
from phlat._src import structure
import sympy
from sympy.combinatorics import permutations as sympy_permutations


Fraction = fractions.Fraction
IntMatrix = exact_linalg.IntMatrix
Permutation = structure.Permutation
PrimePowerEval = Callable[[int, int], int]


def factorize(
    d: int, factor_limit: int = settings.LIMITS['factor_limit']
) -> Dict[int, int]:
  """Prime factorization `{p: m}` of a positive integer."""
  if d < 1:
    raise errors.RangeError(f'Arithmetic functions need d >= 1; got {d}.')
  if d > factor_limit:
    logging.warning('Refusing to factor %d; the limit is %d.', d,
                    factor_limit)
    raise errors.FactorizationLimitError(
        f'Factorization is limited to d <= {factor_limit}; got {d}.')
  return {int(p): int(m) for p, m in sympy.factorint(d).items()}


def is_square_free(d: int) -> bool:
  return all(m == 1 for m in factorize(d).values())


def _require_square_free(d: int) -> Dict[int, int]:
  factors = factorize(d)
  if any(m > 1 for m in factors.values()):
    raise errors.NotSquareFreeError(f'{d} is not square-free.')
  return factors


@attr.define(frozen=True, eq=False)
class ArithFn:
  """A multiplicative function given by its values at prime powers.

  Values at `p^m` are memoized per function. Writes of one key are
  idempotent, so concurrent readers only ever see a missing or a final value.
  """

  name: str
  prime_power_eval: PrimePowerEval = attr.field(repr=False)
  _memo: Dict[Tuple[int, int], int] = attr.field(
      factory=dict, init=False, repr=False)

  def at_prime_power(self, p: int, m: int) -> int:
    if m == 0:
      return 1
    key = (p, m)
    value = self._memo.get(key)
    if value is None:
      value = int(self.prime_power_eval(p, m))
      self._memo[key] = value
    return value

  def __call__(
      self, d: int, factor_limit: int = settings.LIMITS['factor_limit']
  ) -> int:
    return math.prod(self.at_prime_power(p, m)
                     for p, m in factorize(d, factor_limit).items())


def dirichlet_convolve(f: ArithFn, g: ArithFn) -> ArithFn:
  """`(f * g)(d) = Σ_{x|d} f(x)·g(d/x)`, evaluated prime by prime."""

  def prime_power_eval(p, m):
    return sum(f.at_prime_power(p, i) * g.at_prime_power(p, m - i)
               for i in range(m + 1))

  return ArithFn(f'({f.name} * {g.name})', prime_power_eval)


DELTA = ArithFn('δ', lambda p, m: 0)
PHI = ArithFn('φ', lambda p, m: p**m - p**(m - 1))


def convolve_all(fns: Sequence[ArithFn]) -> ArithFn:
  """Convolution of a sequence; the empty convolution is δ."""
  return functools.reduce(dirichlet_convolve, fns) if fns else DELTA


@functools.lru_cache(maxsize=None)
def jordan(k: int) -> ArithFn:
  """Jordan totient `J_k(p^m) = p^{mk} - p^{(m-1)k}`; `J_0` is δ."""
  if k < 0:
    raise errors.RangeError(f'Jordan totients need k >= 0; got {k}.')
  if k == 0:
    return DELTA
  if k == 1:
    return PHI
  return ArithFn(f'J_{k}', lambda p, m: p**(m * k) - p**((m - 1) * k))


def _roots_of_unity_count(k: int, p: int, m: int) -> int:
  if p == 2:
    if m == 1:
      return 1
    # The unit group mod 2^m is Z_2 ⊕ Z_{2^{m-2}}.
    return math.gcd(k, 2) * math.gcd(k, 2**(m - 2))
  return p**min(sympy.multiplicity(p, k), m - 1) * math.gcd(k, p - 1)


@functools.lru_cache(maxsize=None)
def n_k(k: int) -> ArithFn:
  """`N_k(d)`: solutions of `z^k = 1` in `Z_d`."""
  if k < 1:
    raise errors.RangeError(f'N_k needs k >= 1; got {k}.')
  return ArithFn(f'N_{k}', functools.partial(_roots_of_unity_count, k))


def _m_k_eval(k: int, p: int, m: int) -> int:
  if p != 2:
    return p**(m * (k - 1)) + 1
  if m == 1:
    return 2**(k - 1)
  if m == 2:
    return 2**(2 * (k - 1)) + 2**(k - 1)
  return 2**(m * (k - 1)) + 2**((m - 1) * (k - 1)) + 2**k


@functools.lru_cache(maxsize=None)
def m_k(k: int) -> ArithFn:
  """`M_k(d)`: tuples `(a, t_1..t_{k-1})` over `Z_d`.

  Here `a² = 1` and `t_i(a+1) = 0` for every i.
  """
  if k < 2:
    raise errors.RangeError(f'M_k needs k >= 2; got {k}.')
  return ArithFn(f'M_{k}', functools.partial(_m_k_eval, k))


@functools.lru_cache(maxsize=None)
def p_k(k: int) -> ArithFn:
  """`P_k(d) = J_k(√d)` on squares and 0 elsewhere."""
  jk = jordan(k)
  return ArithFn(f'P_{k}',
                 lambda p, m: 0 if m % 2 else jk.at_prime_power(p, m // 2))


M = ArithFn('M', functools.partial(_m_k_eval, 2))
# The 2-primary factor of M.
M_2_PART = ArithFn('M_2part',
                   lambda p, m: M.at_prime_power(p, m) if p == 2 else 1)
N_3 = n_k(3)
P = p_k(1)


def w(d: int) -> int:
  """Number of distinct prime divisors."""
  return len(factorize(d))


def w_prime(d: int) -> int:
  """Number of distinct prime divisors congruent to 1 mod 3."""
  return sum(1 for p in factorize(d) if p % 3 == 1)


def w_double_prime(d: int) -> int:
  return int(d % 9 == 0)


def parity_weight(t: int) -> int:
  return 1 if t % 2 else 2


_ADDITIVE = {
    'w': w,
    "w'": w_prime,
    'w1': w_prime,
    "w''": w_double_prime,
    'w2': w_double_prime,
}

_NAMED = {
    'phi': PHI,
    'φ': PHI,
    'delta': DELTA,
    'δ': DELTA,
    'M': M,
    'M_2part': M_2_PART,
    'N_3': N_3,
    'P': P,
}

_FAMILIES = {'J': jordan, 'N': n_k, 'M': m_k, 'P': p_k}


def arith_fn(name: str) -> ArithFn:
  """Looks up a multiplicative function by name, e.g. `phi`, `J_2`, `M_3`."""
  if name in _NAMED:
    return _NAMED[name]
  family, _, index = name.partition('_')
  if family in _FAMILIES and index.isdigit():
    return _FAMILIES[family](int(index))
  raise errors.InvalidInputError(f'Unknown arithmetic function {name!r}.')


def arith_eval(
    name: str, d: int, factor_limit: int = settings.LIMITS['factor_limit']
) -> int:
  if name in _ADDITIVE:
    factorize(d, factor_limit)
    return _ADDITIVE[name](d)
  return arith_fn(name)(d, factor_limit)


@functools.lru_cache(maxsize=None)
def _weakly_terminal_fn(n: int) -> ArithFn:
  return convolve_all([jordan(k) for k in range(1, n)])


def weakly_terminal_count(n: int, d: int) -> int:
  """F(n, d), the number of weakly terminal n×n matrices of determinant d."""
  if n < 1:
    raise errors.RangeError(f'Matrix size must be positive; got {n}.')
  if n == 1:
    return int(d == 1)
  return _weakly_terminal_fn(n)(d)


################################################################################
# Fixed points of the column action.


def _check_perm(pi: Sequence[int], n: int) -> Permutation:
  pi = tuple(int(x) for x in pi)
  if sorted(pi) != list(range(n)):
    raise errors.InvalidInputError(
        f'{pi} is not a permutation of range({n}).')
  return pi


def orbits_of(pi: Permutation) -> List[Tuple[int, ...]]:
  """Cycles of `pi`, fixed points included."""
  return [tuple(c) for c in
          sympy_permutations.Permutation(list(pi)).full_cyclic_form]


def cycle_type(pi: Permutation) -> Tuple[int, ...]:
  return tuple(sorted((len(c) for c in orbits_of(pi)), reverse=True))


def is_transposition(pi: Permutation) -> bool:
  return sum(1 for i, x in enumerate(pi) if i != x) == 2


def _roots_of_unity_mod_p(k: int, p: int) -> List[int]:
  t = math.gcd(k, p - 1)
  g = int(sympy.primitive_root(p))
  return sorted(pow(g, (p - 1) // t * i, p) for i in range(t))


def _prime_fixed(pi: Permutation, p: int) -> int:
  """S(π)(p) summed over the single non-trivial column j of each matrix."""
  orbits = orbits_of(pi)
  orbit_of = {i: orbit for orbit in orbits for i in orbit}
  total = 0
  for j in range(1, len(pi)):
    below = [orbit for orbit in orbits if max(orbit) < j]
    if pi[j] == j:
      total += jordan(len(below)).at_prime_power(p, 1)
    elif max(orbit_of[j]) == j:
      for z in _roots_of_unity_mod_p(len(orbit_of[j]), p):
        free = sum(1 for orbit in below if pow(z, len(orbit), p) == 1)
        total += p**free
  return total


def transposition_fixed_prime(n: int, p: int) -> int:
  """S(π)(p) for a transposition π in S_n, n > 2."""
  if n < 3:
    raise errors.NotApplicableError(f'Needs n > 2; got {n}.')
  return (p**(n - 1) - 1) // (p - 1) - n + 1 + (2 if p % 2 else 1)


@functools.lru_cache(maxsize=None)
def _transposition_fn(n: int) -> ArithFn:
  prefix = [jordan(k) for k in range(1, n - 2)]
  return convolve_all(prefix + [p_k(n - 2), m_k(n - 1)])


def _enumerate_fixed(pi: Permutation, n: int, d: int, budget: int) -> int:
  total = weakly_terminal_count(n, d)
  if total > budget:
    logging.warning('Fixed-point enumeration of %d matrices exceeds the '
                    'budget %d.', total, budget)
    raise errors.BudgetError(
        f'Enumerating {total} matrices exceeds the budget {budget}.')
  return sum(1 for c in structure.enumerate_weakly_terminal(n, d)
             if structure.is_fixed(c, pi))


class FixedMethod:
  AUTO = 'auto'
  ENUMERATE = 'enumerate'
  PRIME = 'prime'
  SQUAREFREE = 'squarefree'
  TRANSPOSITION = 'transposition'
  CLOSED_FORM = 'closed_form'


def s_fixed(
    pi: Sequence[int],
    n: int,
    d: int,
    method: str = FixedMethod.AUTO,
    max_n: int = settings.LIMITS['max_ph_n'],
    budget: int = settings.LIMITS['census_budget'],
) -> int:
  """S(π)(d): weakly terminal matrices of determinant d fixed by π.

  Args:
    pi: a permutation of `range(n)` in one-line notation.
    n: the matrix size.
    d: the determinant.
    method: `enumerate` counts directly; `prime` uses the closed count at a
      prime; `squarefree` extends it multiplicatively; `transposition` uses
      the convolution for transpositions; `auto` picks the cheapest that
      applies.
    max_n: size limit.
    budget: matrix limit for `enumerate`.

  Returns:
    The number of fixed weakly terminal matrices.
  """
  pi = _check_perm(pi, n)
  structure.check_size(n, max_n, 'Fixed-point count')
  if d < 1:
    raise errors.RangeError(f'Determinants must be positive; got {d}.')
  if method == FixedMethod.AUTO:
    if all(i == x for i, x in enumerate(pi)):
      return weakly_terminal_count(n, d)
    if n > 2 and is_transposition(pi):
      method = FixedMethod.TRANSPOSITION
    elif is_square_free(d):
      method = FixedMethod.SQUAREFREE
    else:
      method = FixedMethod.ENUMERATE
  if method == FixedMethod.ENUMERATE:
    return _enumerate_fixed(pi, n, d, budget)
  if method == FixedMethod.PRIME:
    if not sympy.isprime(d):
      raise errors.NotApplicableError(f'{d} is not prime.')
    return _prime_fixed(pi, d)
  if method == FixedMethod.SQUAREFREE:
    return math.prod(_prime_fixed(pi, p) for p in _require_square_free(d))
  if method == FixedMethod.TRANSPOSITION:
    if n < 3 or not is_transposition(pi):
      raise errors.NotApplicableError(
          f'{pi} is not a transposition with n > 2.')
    return _transposition_fn(n)(d)
  raise errors.InvalidInputError(f'Unknown method {method!r}.')


FixedPointRatio = collections.namedtuple(
    'FixedPointRatio', ['cycle_type', 'representative', 'count', 'ratio'])


def fixed_point_ratios(n: int, d: int, **kwargs) -> List[FixedPointRatio]:
  """S(π)(d)/F(n, d) for one permutation of each cycle type."""
  total = weakly_terminal_count(n, d)
  representatives = {}
  for pi in itertools.permutations(range(n)):
    representatives.setdefault(cycle_type(pi), pi)
  ratios = []
  for shape, pi in sorted(representatives.items(), reverse=True):
    count = s_fixed(pi, n, d, **kwargs)
    ratios.append(FixedPointRatio(shape, pi, count, Fraction(count, total)))
  return ratios


################################################################################
# The Burnside census.


Orbit = collections.namedtuple('Orbit', ['representative', 'size', 'summary'])


@attr.define(frozen=True)
class ClassCensus:
  """All S_n-orbits on weakly terminal n×n matrices of determinant d."""

  n: int
  d: int
  orbits: Tuple[Orbit, ...] = attr.field(converter=tuple)
  # `(perm, S(perm)(d))` for every perm in S_n.
  fixed_counts: Tuple[Tuple[Permutation, int], ...] = attr.field(
      converter=tuple)

  @property
  def classes(self) -> int:
    return len(self.orbits)

  @property
  def matrix_count(self) -> int:
    return sum(orbit.size for orbit in self.orbits)

  def fixed(self, pi: Sequence[int]) -> int:
    return dict(self.fixed_counts)[tuple(pi)]

  def count_where(self, predicate: Callable[[Mapping], bool]) -> int:
    return sum(1 for orbit in self.orbits if predicate(orbit.summary))

  def to_lines(self) -> List[str]:
    header = {
        'format_version': settings.CACHE_FORMAT_VERSION,
        'n': self.n,
        'd': self.d,
        'fixed': [[list(p), c] for p, c in self.fixed_counts],
    }
    lines = [json.dumps(header, sort_keys=True)]
    for orbit in self.orbits:
      lines.append(json.dumps({
          'representative': orbit.representative.tolist(),
          'size': orbit.size,
          'summary': orbit.summary,
      }, sort_keys=True))
    return lines

  @classmethod
  def from_lines(cls, lines: Sequence[str]) -> Optional['ClassCensus']:
    """Parses `to_lines` output; None when the format version differs."""
    header = json.loads(lines[0])
    if header.get('format_version') != settings.CACHE_FORMAT_VERSION:
      return None
    orbits = []
    for line in lines[1:]:
      record = json.loads(line)
      orbits.append(Orbit(IntMatrix(record['representative']),
                          record['size'], record['summary']))
    fixed = [(tuple(p), c) for p, c in header['fixed']]
    return cls(header['n'], header['d'], orbits, fixed)


def save_census(census: ClassCensus, path: Optional[str] = None) -> str:
  path = path or settings.census_path(census.n, census.d)
  os.makedirs(os.path.dirname(path), exist_ok=True)
  tmp = f'{path}.tmp.{os.getpid()}'
  with open(tmp, 'w') as f:
    f.write('\n'.join(census.to_lines()) + '\n')
  os.replace(tmp, path)
  return path


def load_census(n: int, d: int,
                path: Optional[str] = None) -> Optional[ClassCensus]:
  path = path or settings.census_path(n, d)
  if not os.path.exists(path):
    return None
  with open(path) as f:
    lines = [line for line in f.read().splitlines() if line]
  census = ClassCensus.from_lines(lines) if lines else None
  if census is None or (census.n, census.d) != (n, d):
    logging.info('Ignoring stale census cache %s.', path)
    return None
  return census


def _orbit_summary(orbit: Sequence[IntMatrix],
                   representative: IntMatrix) -> Dict[str, object]:
  sizes = sorted({structure.one_block_size(c)
                  for c in orbit if structure.is_terminal(c)})
  if not sizes:
    # Every NS class holds a terminal form.
    raise errors.NotTerminalError(
        f'Class of {representative} contains no terminal form.')
  return {
      'diagonal': list(representative.diag()),
      'one_block_sizes': sizes,
      'max_one_block': max(sizes),
  }


def ph_count_bruteforce(
    n: int,
    d: int,
    max_n: int = settings.LIMITS['max_census_n'],
    budget: int = settings.LIMITS['census_budget'],
    use_cache: bool = False,
    log_every: int = 10_000,
) -> ClassCensus:
  """Orbit census of `C ↦ HNF(C·P)` on weakly terminal matrices."""
  if n < 1 or d < 1:
    raise errors.RangeError(f'Need n, d >= 1; got n = {n}, d = {d}.')
  structure.check_size(n, max_n, 'Census')
  total = weakly_terminal_count(n, d)
  perms = list(itertools.permutations(range(n)))
  cost = total * len(perms)
  if cost > budget:
    logging.warning('Census n = %d, d = %d needs %d products; the budget is '
                    '%d.', n, d, cost, budget)
    raise errors.BudgetError(
        f'Census of n = {n}, d = {d} needs {cost} products; budget {budget}.')
  if use_cache:
    cached = load_census(n, d)
    if cached is not None:
      logging.info('Census cache hit for n = %d, d = %d.', n, d)
      return cached
    logging.info('Census cache miss for n = %d, d = %d.', n, d)

  seen = set()
  orbits = []
  fixed = collections.Counter()
  for index, c in enumerate(structure.enumerate_weakly_terminal(n, d), 1):
    images = [structure.act(c, perm) for perm in perms]
    for perm, image in zip(perms, images):
      if image == c:
        fixed[perm] += 1
    if c not in seen:
      orbit = set(images)
      seen |= orbit
      representative = min(orbit, key=structure.canonical_key)
      orbits.append(Orbit(representative, len(orbit),
                          _orbit_summary(orbit, representative)))
    if index % log_every == 0:
      logging.info('Census n = %d, d = %d: %d of %d matrices, %d classes.',
                   n, d, index, total, len(orbits))

  orbits.sort(key=lambda orbit: structure.canonical_key(orbit.representative))
  census = ClassCensus(n, d, orbits, [(perm, fixed[perm]) for perm in perms])
  assert census.matrix_count == total
  # Burnside.
  assert sum(fixed.values()) == census.classes * len(perms)
  logging.info('Census n = %d, d = %d: %d classes from %d matrices.', n, d,
               census.classes, total)
  if use_cache:
    save_census(census)
  return census


################################################################################
# Size three.


_THREE_CYCLE = (1, 2, 0)
_TRANSPOSITION = (0, 2, 1)


def _fixed_upper3(a: int, b: int, e: int, c: int, f: int,
                  perm: Permutation) -> bool:
  """Whether `[[1,a,b],[0,e,c],[0,0,f]]` is fixed by `perm`.

  Tests `C·P·adj(C) ≡ 0 (mod det C)`.
  """
  rows = ((1, a, b), (0, e, c), (0, 0, f))
  adj = ((e * f, -a * f, a * c - b * e), (0, f, -c), (0, 0, e))
  det = e * f
  cp = [[0] * 3 for _ in range(3)]
  for i in range(3):
    for j in range(3):
      cp[i][perm[j]] = rows[i][j]
  return all(sum(cp[i][k] * adj[k][j] for k in range(3)) % det == 0
             for i in range(3) for j in range(3))


def _s132_enumerate(p: int, m: int) -> int:
  # A fixed matrix has equal cokernels after each column deletion, which
  # forces the diagonal (1, e, e·x) with e = gcd of the last column's lower
  # entries, and d = e²·x.
  count = 0
  for k in range(m // 2 + 1):
    e = p**k
    x = p**(m - 2 * k)
    f = e * x
    for a in range(e):
      if math.gcd(a, e) != 1:
        continue
      for y in range(x):
        if math.gcd(x, y) != 1:
          continue
        for b in range(f):
          if (math.gcd(b, e) == 1
              and _fixed_upper3(a, b, e, e * y, f, _THREE_CYCLE)):
            count += 1
  return count


def s132_closed_form(p: int, m: int) -> int:
  """S((132))(p^m) for p ≠ 3."""
  if p == 3:
    raise errors.NotApplicableError('No closed form at p = 3.')
  return 3 * m if p % 3 == 1 else parity_weight(m)


def s132_prime_power(
    p: int,
    m: int,
    method: str = FixedMethod.AUTO,
    max_enumerated: int = settings.LIMITS['s132_max_prime_power'],
) -> int:
  """S((132))(p^m).

  `auto` enumerates while `p^m <= max_enumerated`, and always at p = 3.
  Above that it uses the closed form, which the enumeration cross-checks.
  """
  if method == FixedMethod.CLOSED_FORM:
    return s132_closed_form(p, m)
  if method == FixedMethod.AUTO and p != 3 and p**m > max_enumerated:
    logging.debug('S((132))(%d^%d) from the closed form.', p, m)
    return s132_closed_form(p, m)
  return _s132_enumerate(p, m)


def s132(d: int, method: str = FixedMethod.AUTO) -> int:
  return math.prod(s132_prime_power(p, m, method)
                   for p, m in factorize(d).items())


def ph_count_3(d: int, method: str = FixedMethod.AUTO) -> int:
  """PH(3, d) = (F(3, d) + 3·S((23))(d) + 2·S((132))(d)) / 6."""
  total = (weakly_terminal_count(3, d)
           + 3 * s_fixed(_TRANSPOSITION, 3, d,
                         method=FixedMethod.TRANSPOSITION)
           + 2 * s132(d, method))
  assert total % 6 == 0, (d, total)
  return total // 6


def ph_count_3_squarefree(d: int) -> int:
  factors = _require_square_free(d)
  first = PHI(d) * math.prod(p + 2 for p in factors)
  middle = 3 * math.prod(p + 1 if p != 2 else 2 for p in factors)
  total = first + middle + 2 * 3**w_prime(d)
  assert total % 6 == 0, (d, total)
  return total // 6


def _require_prime(p: int, what: str = 'p') -> None:
  if not sympy.isprime(p):
    raise errors.NotApplicableError(f'{what} = {p} is not prime.')


def ph_count_3_prime(p: int) -> int:
  _require_prime(p)
  return (p * p + 4 * p + 1 + 2 * 3**w_prime(p)) // 6


def ph_count_3_twice_prime(p: int) -> int:
  """PH(3, 2p) for an odd prime p."""
  _require_prime(p)
  if p == 2:
    raise errors.NotApplicableError('p must be odd.')
  return (2 * p * p + 5 * p - 1 + 3**w_prime(2 * p)) // 3


def ph_count_3_pq(p: int, q: int) -> int:
  """PH(3, pq) for distinct odd primes p and q."""
  _require_prime(p)
  _require_prime(q, 'q')
  if p == q or 2 in (p, q):
    raise errors.NotApplicableError(
        f'p and q must be distinct odd primes; got {p}, {q}.')
  d = p * q
  phi = PHI(d)
  return (phi * (3 * d - 2 * phi + 3) + 2 * 3**w_prime(d)) // 6 + d + 1


def ph_count_3_prime_square(p: int) -> int:
  _require_prime(p)
  if p == 2:
    return 7
  d = p * p
  extra = 2 * 3**w_prime(d) * (1 + 3**w_double_prime(d))
  return (p**4 + p**3 + 2 * p * p + p + 1 + extra) // 6


@attr.define(frozen=True)
class Block2Counts:
  """Classes of 3×3 matrices with a terminal form of 1-block size two.

  Case 1 has both entries of the last column units mod d, case 2 exactly one,
  case 3 neither.
  """

  case1: int
  case2: int
  case3: int

  @property
  def total(self) -> int:
    return self.case1 + self.case2 + self.case3


def block2_counts(d: int) -> Block2Counts:
  if d < 2:
    raise errors.RangeError(f'Needs d > 1; got {d}.')
  factors = factorize(d)
  phi = PHI(d)
  case1 = phi * phi + 3 * phi + 2 * 3**(w_prime(d) + w_double_prime(d))
  case2 = phi * (d - phi - 1) + M(d)
  case3 = Fraction(d * phi, 2) * (
      math.prod(Fraction(p + 1, p) for p in factors) - 2 +
      math.prod(Fraction(p - 1, p) for p in factors))
  assert case1 % 6 == 0 and case2 % 2 == 0 and case3.denominator == 1, d
  return Block2Counts(case1 // 6, case2 // 2, int(case3))


def nonblock2_count(d: int) -> int:
  """Classes with no terminal form of 1-block size two, for square-free d."""
  factors = _require_square_free(d)
  x = sympy.Symbol('x')
  f = sympy.Poly(math.prod((x + p for p in factors), start=sympy.Integer(1)),
                 x, domain='ZZ')
  third_difference = sum((-1)**(3 - i) * math.comb(3, i) * f.eval(i - 1)
                         for i in range(4))
  total = PHI(d) * int(third_difference)
  assert total % 6 == 0, (d, total)
  return total // 6


def burnside_excess(d: int) -> Fraction:
  """`(6·PH(3, d)/F(3, d) - 1)·d/3`, which tends to 1 on square-free d."""
  return (Fraction(6 * ph_count_3(d), weakly_terminal_count(3, d)) - 1) * d / 3


def census_lines(census: ClassCensus) -> Iterator[str]:
  for orbit in census.orbits:
    yield (f'{exact_linalg.format_matrix(orbit.representative)}\t'
           f'{orbit.size}\t{orbit.summary["max_one_block"]}')
