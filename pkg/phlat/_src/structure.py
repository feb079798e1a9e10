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

"""Structure of weakly nonsingular (NS) integer matrices.

Currently implements the following:
- Weakly terminal representatives and the terminal-form test
- 1-block sizes, and their maximum over a permutation-Hermite class
- Weak indecomposability
- Standard forms `(I a; 0 d)`
- Enumeration of weakly terminal matrices of fixed determinant

Columns are indexed from 0. Permutations are tuples in one-line notation and
act on columns through `IntMatrix.permutation`.

"""
# pylint: disable=invalid-name

import functools
import itertools
import math
from typing import FrozenSet, Iterator, List, Sequence, Set, Tuple

from absl import logging
import attr
from phlat._src import errors
from phlat._src import exact_linalg
from phlat._src import settings
import sympy


IntMatrix = exact_linalg.IntMatrix
Permutation = Tuple[int, ...]


def _check_standard_form(instance, attribute, value):
  del attribute  # Unused.
  d = instance.d
  if d < 2:
    raise errors.BadColumnError(f'Standard forms need d > 1; got {d}.')
  if any(not 0 <= x < d for x in value):
    raise errors.BadColumnError(f'Entries of {value} must lie in [0, {d}).')
  if math.gcd(d, *value) != 1:
    raise errors.BadColumnError(f'gcd({d}, {value}) must be 1.')
  gcds = [math.gcd(d, x) for x in value]
  if any(g < h for g, h in zip(gcds, gcds[1:])):
    raise errors.BadColumnError(
        f'Entries of {value} are not sorted by nonincreasing gcd with {d}.')


@attr.define(frozen=True)
class StandardForm:
  """The matrix `B_a = (I_{n-1} a; 0 d)`."""

  d: int
  a: Tuple[int, ...] = attr.field(
      converter=lambda a: tuple(int(x) for x in a),
      validator=_check_standard_form)

  @property
  def n(self) -> int:
    return len(self.a) + 1

  @classmethod
  def sorted_from(cls, a: Sequence[int], d: int) -> 'StandardForm':
    """Reduces `a` mod `d` and applies the canonical ordering."""
    a = [x % d for x in a]
    return cls(d, sorted(a, key=lambda x: (-math.gcd(d, x), x)))


def _check_members(instance, attribute, value):
  del attribute  # Unused.
  bad = [i for i in value if not 0 <= i < instance.n]
  if bad:
    raise errors.BadSubsetError(
        f'Indices {sorted(bad)} are outside range({instance.n}).')


@attr.define(frozen=True)
class Subset:
  """A set of column indices of an n-column matrix."""

  n: int
  members: FrozenSet[int] = attr.field(
      converter=frozenset, validator=_check_members)

  @classmethod
  def full(cls, n: int) -> 'Subset':
    return cls(n, range(n))

  @classmethod
  def omega(cls, n: int, i: int) -> 'Subset':
    """All indices except `i`."""
    if not 0 <= i < n:
      raise errors.BadSubsetError(f'Index {i} is outside range({n}).')
    return cls(n, set(range(n)) - {i})

  @classmethod
  def all_subsets(cls, n: int) -> List['Subset']:
    """Every subset, by cardinality then lexicographically."""
    return [
        cls(n, combo)
        for k in range(n + 1)
        for combo in itertools.combinations(range(n), k)
    ]

  def __len__(self) -> int:
    return len(self.members)

  def __iter__(self):
    return iter(sorted(self.members))

  def complement(self) -> 'Subset':
    return Subset(self.n, set(range(self.n)) - self.members)

  def image(self, perm: Permutation) -> 'Subset':
    return Subset(self.n, {perm[i] for i in self.members})

  def label(self) -> str:
    """1-based label, e.g. `{2,3}`."""
    return '{' + ','.join(str(i + 1) for i in self) + '}'


def require_ns(b: IntMatrix) -> None:
  if not exact_linalg.is_ns(b):
    raise errors.NotNSError(f'Matrix {b} is not weakly nonsingular.')


def compose(p: Permutation, q: Permutation) -> Permutation:
  """The permutation whose matrix is `P·Q`."""
  return tuple(q[p[j]] for j in range(len(p)))


def inverse(p: Permutation) -> Permutation:
  inv = [0] * len(p)
  for j, pj in enumerate(p):
    inv[pj] = j
  return tuple(inv)


def act(c: IntMatrix, perm: Permutation) -> IntMatrix:
  """The orbit map `C ↦ HNF(C·P)`."""
  return exact_linalg.hermite_form(c @ IntMatrix.permutation(perm))


def weakly_terminal(b: IntMatrix) -> IntMatrix:
  require_ns(b)
  return exact_linalg.hermite_form(b)


def is_terminal(c: IntMatrix) -> bool:
  """Tests the terminal-form conditions on an upper triangular matrix.

  The diagonal must be positive and nondecreasing, entries above the diagonal
  must lie in `[0, C_jj)`, and for `i < j` the diagonal entry `C_ii` may not
  exceed `gcd(C_jj, C_ij, ..., C_{j-1,j})`.

  Args:
    c: a square integer matrix.

  Returns:
    Whether `c` is a terminal form.
  """
  if not c.is_square:
    raise errors.ShapeError(f'Terminal forms are square; got {c.shape}.')
  n = c.rows
  diag = c.diag()
  if any(c[i, j] for i in range(n) for j in range(i)):
    return False
  if diag[0] <= 0 or any(x > y for x, y in zip(diag, diag[1:])):
    return False
  for j in range(n):
    column = c.col(j)
    if exact_linalg.content(column) != 1:
      return False
    for i in range(j):
      if not 0 <= column[i] < diag[j]:
        return False
      if diag[i] > math.gcd(diag[j], *column[i:j]):
        return False
  return True


def one_block_size(c: IntMatrix) -> int:
  if not is_terminal(c):
    raise errors.NotTerminalError(f'Matrix {c} is not in terminal form.')
  return sum(1 for _ in itertools.takewhile(lambda x: x == 1, c.diag()))


def spans_coordinates(b: IntMatrix, columns: Sequence[int]) -> bool:
  """Whether the rows of `b` restricted to `columns` span `Z^|columns|`."""
  return exact_linalg.cokernel(b.columns(columns)).torsion.is_trivial


def max_one_block(b: IntMatrix) -> int:
  require_ns(b)
  n = b.rows
  for m in range(n, 0, -1):
    if any(spans_coordinates(b, combo)
           for combo in itertools.combinations(range(n), m)):
      return m
  return 0


def check_size(n: int, limit: int, what: str) -> None:
  if n > limit:
    logging.warning('%s refused at n = %d; the limit is %d.', what, n, limit)
    raise errors.SizeLimitError(f'{what} is limited to n <= {limit}; got {n}.')


def class_one_block_sizes(
    b: IntMatrix, max_n: int = settings.LIMITS['max_ph_n']) -> Set[int]:
  """1-block sizes of all terminal forms in the class of `b`."""
  require_ns(b)
  check_size(b.rows, max_n, 'Class enumeration')
  sizes = set()
  for perm in itertools.permutations(range(b.rows)):
    c = act(b, perm)
    if is_terminal(c):
      sizes.add(one_block_size(c))
  return sizes


def is_weakly_indecomposable(b: IntMatrix) -> bool:
  """No standard basis row lies in the row space of `b`."""
  require_ns(b)
  inv = exact_linalg.rational_inverse(b)
  return not any(
      all(x.denominator == 1 for x in inv.row(i)) for i in range(b.rows))


def standard_matrix(form: StandardForm) -> IntMatrix:
  n = form.n
  rows = [[int(i == j) for j in range(n - 1)] + [form.a[i]]
          for i in range(n - 1)]
  rows.append([0] * (n - 1) + [form.d])
  return IntMatrix(rows)


def to_standard_form(b: IntMatrix) -> StandardForm:
  require_ns(b)
  n = b.rows
  if abs(exact_linalg.determinant(b)) == 1:
    raise errors.UnimodularError(f'Matrix {b} is unimodular.')
  for i in range(n):
    rest = [j for j in range(n) if j != i]
    if spans_coordinates(b, rest):
      break
  else:
    raise errors.NoLargeBlockError(
        f'Matrix {b} has no terminal form with a 1-block of size {n - 1}.')
  perm = tuple(n - 1 if j == i else (j if j < i else j - 1) for j in range(n))
  c = act(b, perm)
  a = [c[k, n - 1] for k in range(n - 1)]
  return StandardForm.sorted_from(a, c[n - 1, n - 1])


def is_fixed(c: IntMatrix, perm: Permutation) -> bool:
  """Whether the weakly terminal `c` is fixed by the column action of `perm`."""
  return act(c, perm) == c


def canonical_key(c: IntMatrix) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
  """Orders weakly terminal matrices by diagonal, then by the entries above."""
  n = c.rows
  return c.diag(), tuple(c[i, j] for i in range(n) for j in range(i + 1, n))


def _ordered_factorizations(d: int, k: int) -> Iterator[Tuple[int, ...]]:
  if k == 1:
    yield (d,)
    return
  for x in sympy.divisors(d):
    for rest in _ordered_factorizations(d // x, k - 1):
      yield (x,) + rest


@functools.lru_cache(maxsize=None)
def _unimodular_columns(length: int, modulus: int) -> Tuple[Tuple[int, ...],
                                                            ...]:
  return tuple(v for v in itertools.product(range(modulus), repeat=length)
               if math.gcd(modulus, *v) == 1)


def enumerate_weakly_terminal(n: int, d: int) -> Iterator[IntMatrix]:
  """Yields every weakly terminal n×n matrix of determinant `d` once.

  Matrices come in lexicographic order of (diagonal, above-diagonal entries
  in row-major order). A diagonal whose first entry exceeds 1 has no NS
  completion, since the first column would have content `d_1`.
  """
  if n == 1:
    if d == 1:
      yield IntMatrix([[1]])
    return
  for diagonal in _ordered_factorizations(d, n):
    if diagonal[0] != 1:
      continue
    choices = [_unimodular_columns(j, diagonal[j]) for j in range(1, n)]
    batch = []
    for combo in itertools.product(*choices):
      rows = [[0] * n for _ in range(n)]
      for i in range(n):
        rows[i][i] = diagonal[i]
      for j, column in enumerate(combo, start=1):
        for i, x in enumerate(column):
          rows[i][j] = x
      batch.append(IntMatrix(rows))
    batch.sort(key=canonical_key)
    yield from batch
