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

"""Exact integer and rational linear algebra.

Currently implements the following:
- Row-style Hermite normal form with its unimodular transform
- Smith diagonalization, cokernels and invariant-factor chains
- Exact determinant, rank and rational inverse
- Text and JSON matrix codecs

Every computation stays in Python integers or `fractions.Fraction`; nothing
passes through floating point. Matrices act on row vectors: the Hermite form
of `M` is the canonical representative of the orbit `{U·M : U ∈ GL(n, Z)}`.

"""
# pylint: disable=invalid-name

import collections
import fractions
import functools
import json
import math
from typing import Any, Iterable, List, Sequence, Tuple

import attr
import numpy as np
from phlat._src import errors
import sympy
try:
  from sympy.core.intfunc import igcdex
except ImportError:  # sympy < 1.13
  from sympy.core.numbers import igcdex


Fraction = fractions.Fraction

_Row = Tuple[int, ...]
_Rows = Tuple[_Row, ...]

HnfResult = collections.namedtuple('HnfResult', ['h', 'u'])
SmithResult = collections.namedtuple('SmithResult', ['u', 'd', 'v'])
Cokernel = collections.namedtuple('Cokernel', ['torsion', 'free_rank'])


def _int_rows(data: Iterable[Iterable[Any]]) -> _Rows:
  return tuple(tuple(int(x) for x in row) for row in data)


def _fraction_rows(data: Iterable[Iterable[Any]]) -> Tuple[Tuple[Fraction,
                                                                 ...], ...]:
  return tuple(tuple(Fraction(x) for x in row) for row in data)


def _check_shape(data: Sequence[Sequence[Any]]) -> None:
  if not data or not data[0]:
    raise errors.ShapeError('A matrix needs at least one row and one column.')
  width = len(data[0])
  for i, row in enumerate(data):
    if len(row) != width:
      raise errors.ShapeError(
          f'Row {i} has {len(row)} entries; expected {width}.')


@attr.define(frozen=True)
class IntMatrix:
  """Dense matrix of Python integers, stored as a tuple of row tuples."""

  data: _Rows = attr.field(converter=_int_rows)

  def __attrs_post_init__(self):
    _check_shape(self.data)

  @classmethod
  def identity(cls, n: int) -> 'IntMatrix':
    return cls([[int(i == j) for j in range(n)] for i in range(n)])

  @classmethod
  def diagonal(cls, values: Sequence[int]) -> 'IntMatrix':
    n = len(values)
    return cls([[values[i] if i == j else 0 for j in range(n)]
                for i in range(n)])

  @classmethod
  def permutation(cls, perm: Sequence[int]) -> 'IntMatrix':
    """Permutation matrix with `P[j, perm[j]] = 1`.

    Right multiplication moves column `j` of `C` to position `perm[j]` of
    `C·P`.

    Args:
      perm: a permutation of `range(n)` in one-line notation.

    Returns:
      The n×n permutation matrix.
    """
    n = len(perm)
    if sorted(perm) != list(range(n)):
      raise errors.ShapeError(f'{tuple(perm)} is not a permutation.')
    return cls([[int(perm[j] == k) for k in range(n)] for j in range(n)])

  @classmethod
  def from_array(cls, array: np.ndarray) -> 'IntMatrix':
    return cls(array.tolist())

  @property
  def rows(self) -> int:
    return len(self.data)

  @property
  def cols(self) -> int:
    return len(self.data[0])

  @property
  def shape(self) -> Tuple[int, int]:
    return self.rows, self.cols

  @property
  def is_square(self) -> bool:
    return self.rows == self.cols

  @property
  def T(self) -> 'IntMatrix':
    return IntMatrix(zip(*self.data))

  def __getitem__(self, index: Tuple[int, int]) -> int:
    i, j = index
    return self.data[i][j]

  def row(self, i: int) -> _Row:
    return self.data[i]

  def col(self, j: int) -> _Row:
    return tuple(row[j] for row in self.data)

  def diag(self) -> _Row:
    return tuple(self.data[i][i] for i in range(min(self.shape)))

  def columns(self, indices: Sequence[int]) -> 'IntMatrix':
    """Keeps the listed columns, in the listed order."""
    return IntMatrix([[row[j] for j in indices] for row in self.data])

  def to_array(self) -> np.ndarray:
    """Object array, so that products stay in arbitrary precision."""
    return np.array(self.data, dtype=object).reshape(self.shape)

  def tolist(self) -> List[List[int]]:
    return [list(row) for row in self.data]

  def __matmul__(self, other):
    if isinstance(other, RatMatrix):
      return RatMatrix(self.data) @ other
    if self.cols != other.rows:
      raise errors.ShapeError(
          f'Cannot multiply {self.shape} by {other.shape}.')
    return IntMatrix.from_array(self.to_array() @ other.to_array())

  def __neg__(self) -> 'IntMatrix':
    return IntMatrix([[-x for x in row] for row in self.data])

  def __str__(self) -> str:
    return format_matrix(self)


@attr.define(frozen=True)
class RatMatrix:
  """Dense matrix of exact rationals in lowest terms."""

  data: Tuple[Tuple[Fraction, ...], ...] = attr.field(
      converter=_fraction_rows)

  def __attrs_post_init__(self):
    _check_shape(self.data)

  @property
  def rows(self) -> int:
    return len(self.data)

  @property
  def cols(self) -> int:
    return len(self.data[0])

  @property
  def shape(self) -> Tuple[int, int]:
    return self.rows, self.cols

  @property
  def T(self) -> 'RatMatrix':
    return RatMatrix(zip(*self.data))

  def __getitem__(self, index: Tuple[int, int]) -> Fraction:
    i, j = index
    return self.data[i][j]

  def row(self, i: int) -> Tuple[Fraction, ...]:
    return self.data[i]

  def is_integral(self) -> bool:
    return all(x.denominator == 1 for row in self.data for x in row)

  def non_integral_entries(self) -> List[Tuple[Tuple[int, int], Fraction]]:
    """Positions and values of entries that are not integers, row-major."""
    return [((i, j), x)
            for i, row in enumerate(self.data)
            for j, x in enumerate(row)
            if x.denominator != 1]

  def to_int(self) -> IntMatrix:
    if not self.is_integral():
      raise errors.InvalidInputError('Matrix has non-integral entries.')
    return IntMatrix([[x.numerator for x in row] for row in self.data])

  def scale_rows(self, factors: Sequence[int]) -> 'RatMatrix':
    return RatMatrix([[f * x for x in row]
                      for f, row in zip(factors, self.data)])

  def __matmul__(self, other) -> 'RatMatrix':
    if self.cols != other.rows:
      raise errors.ShapeError(
          f'Cannot multiply {self.shape} by {other.shape}.')
    lhs = np.array(self.data, dtype=object).reshape(self.shape)
    rhs = np.array(other.data, dtype=object).reshape(other.shape)
    return RatMatrix((lhs @ rhs).tolist())

  def __str__(self) -> str:
    return '; '.join(' '.join(str(x) for x in row) for row in self.data)


def _validate_chain(instance, attribute, value):
  del instance, attribute  # Unused.
  for f in value:
    if f < 2:
      raise ValueError(f'Invariant factors must be at least 2; got {value}.')
  for f, g in zip(value, value[1:]):
    if g % f:
      raise ValueError(f'{value} is not a divisibility chain.')


@attr.define(frozen=True)
class AbelianGroup:
  """Finite abelian group as an invariant-factor chain `f_1 | f_2 | ...`."""

  factors: Tuple[int, ...] = attr.field(
      converter=lambda fs: tuple(int(f) for f in fs),
      validator=_validate_chain,
      factory=tuple)

  @classmethod
  def from_orders(cls, orders: Iterable[int]) -> 'AbelianGroup':
    """Normalizes `Z_{o_1} + Z_{o_2} + ...` through its elementary divisors."""
    by_prime = collections.defaultdict(list)
    for order in orders:
      order = abs(int(order))
      if order == 0:
        raise ValueError('Infinite cyclic summands are not torsion.')
      for p, e in sympy.factorint(order).items():
        by_prime[p].append(p**e)
    length = max((len(v) for v in by_prime.values()), default=0)
    factors = [1] * length
    for powers in by_prime.values():
      powers.sort(reverse=True)
      for i, q in enumerate(powers):
        factors[i] *= q
    return cls(tuple(reversed(factors)))

  @classmethod
  def cyclic(cls, order: int) -> 'AbelianGroup':
    return cls.from_orders([order])

  @property
  def order(self) -> int:
    return math.prod(self.factors)

  @property
  def exponent(self) -> int:
    return self.factors[-1] if self.factors else 1

  @property
  def is_trivial(self) -> bool:
    return not self.factors

  @property
  def is_cyclic(self) -> bool:
    return len(self.factors) <= 1

  def direct_sum(self, other: 'AbelianGroup') -> 'AbelianGroup':
    return AbelianGroup.from_orders(self.factors + other.factors)

  def __str__(self) -> str:
    if not self.factors:
      return '0'
    return ' + '.join(f'Z_{f}' for f in self.factors)


def content(v: Iterable[int]) -> int:
  """gcd of the entries; 0 for the zero vector."""
  return functools.reduce(math.gcd, v, 0)


def _row_reduce(rows: _Rows, track: bool):
  """Hermite reduction of `rows` in place of a copy.

  Returns:
    A tuple `(h, u, sign)` with `h = u·rows` in Hermite normal form, `u`
    unimodular (None unless `track`) and `sign = det(u)`.
  """
  a = [list(r) for r in rows]
  nrows, ncols = len(a), len(a[0])
  u = [[int(i == j) for j in range(nrows)] for i in range(nrows)
      ] if track else None
  sign = 1
  mats = (a, u) if track else (a,)
  r = 0
  for c in range(ncols):
    if r == nrows:
      break
    for i in range(r + 1, nrows):
      y = a[i][c]
      if y == 0:
        continue
      x = a[r][c]
      s, t, g = igcdex(x, y)
      px, py = x // g, y // g
      # [[s, t], [-py, px]] has determinant 1.
      for m in mats:
        top, bottom = m[r], m[i]
        m[r] = [s * e + t * f for e, f in zip(top, bottom)]
        m[i] = [px * f - py * e for e, f in zip(top, bottom)]
    pivot = a[r][c]
    if pivot == 0:
      continue
    if pivot < 0:
      sign = -sign
      for m in mats:
        m[r] = [-e for e in m[r]]
      pivot = -pivot
    for i in range(r):
      q = a[i][c] // pivot
      if q:
        for m in mats:
          m[i] = [e - q * f for e, f in zip(m[i], m[r])]
    r += 1
  return a, u, sign


def hnf(m: IntMatrix) -> HnfResult:
  """Row-style Hermite normal form `H = U·M` with `U` unimodular."""
  a, u, _ = _row_reduce(m.data, track=True)
  return HnfResult(IntMatrix(a), IntMatrix(u))


def hermite_form(m: IntMatrix) -> IntMatrix:
  """Hermite normal form without the transform."""
  a, _, _ = _row_reduce(m.data, track=False)
  return IntMatrix(a)


def _is_diagonal(m: IntMatrix) -> bool:
  return all(x == 0
             for i, row in enumerate(m.data)
             for j, x in enumerate(row)
             if i != j)


def smith_form(m: IntMatrix) -> SmithResult:
  """Unimodular `U, V` with `U·M·V = D` diagonal.

  `D` is not normalized to a divisibility chain; `snf` does that. Rows and
  columns are cleared alternately by Hermite reduction until nothing is left
  off the diagonal.
  """
  u = IntMatrix.identity(m.rows)
  v = IntMatrix.identity(m.cols)
  d = m
  while not _is_diagonal(d):
    h, uu = hnf(d)
    u, d = uu @ u, h
    if _is_diagonal(d):
      break
    ht, vv = hnf(d.T)
    v, d = v @ vv.T, ht.T
  return SmithResult(u, d, v)


def _diagonal_entries(m: IntMatrix) -> List[int]:
  d = m
  while not _is_diagonal(d):
    d = hermite_form(d)
    if _is_diagonal(d):
      break
    d = hermite_form(d.T).T
  return [abs(x) for x in d.diag()]


def snf(m: IntMatrix) -> AbelianGroup:
  """Invariant factors of the cokernel `Z^cols / rowspace(M)` (torsion)."""
  return AbelianGroup.from_orders(x for x in _diagonal_entries(m) if x)


def cokernel(m: IntMatrix) -> Cokernel:
  entries = _diagonal_entries(m)
  nonzero = [x for x in entries if x]
  return Cokernel(AbelianGroup.from_orders(nonzero), m.cols - len(nonzero))


def rank(m: IntMatrix) -> int:
  h = hermite_form(m)
  return sum(1 for row in h.data if any(row))


def determinant(m: IntMatrix) -> int:
  """Exact determinant from the Hermite diagonal and the sign of `det U`."""
  if not m.is_square:
    raise errors.ShapeError(f'Determinant of a non-square {m.shape} matrix.')
  a, _, sign = _row_reduce(m.data, track=False)
  return sign * math.prod(a[i][i] for i in range(len(a)))


def rational_inverse(m: IntMatrix) -> RatMatrix:
  """Exact inverse over Q by Gauss-Jordan elimination."""
  if not m.is_square:
    raise errors.ShapeError(f'Cannot invert a non-square {m.shape} matrix.')
  n = m.rows
  a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
       for i, row in enumerate(m.data)]
  for c in range(n):
    pivot_row = next((i for i in range(c, n) if a[i][c]), None)
    if pivot_row is None:
      raise errors.SingularMatrixError(f'Matrix {m} has determinant 0.')
    a[c], a[pivot_row] = a[pivot_row], a[c]
    inv = 1 / a[c][c]
    a[c] = [x * inv for x in a[c]]
    for i in range(n):
      if i != c and a[i][c]:
        f = a[i][c]
        a[i] = [x - f * y for x, y in zip(a[i], a[c])]
  return RatMatrix([row[n:] for row in a])


def is_ns(m: IntMatrix) -> bool:
  """Weak nonsingularity: full rank with every column of content 1."""
  if not m.is_square:
    raise errors.ShapeError(
        f'NS is defined for square matrices; got {m.shape}.')
  if any(content(m.col(j)) != 1 for j in range(m.cols)):
    return False
  return determinant(m) != 0


def unimodular_inverse(m: IntMatrix) -> IntMatrix:
  return rational_inverse(m).to_int()


def format_matrix(m: IntMatrix) -> str:
  return '; '.join(' '.join(str(x) for x in row) for row in m.data)


def matrix_to_json(m: IntMatrix) -> dict:
  return {'rows': m.rows, 'cols': m.cols, 'data': m.tolist()}


def _parse_int(token: str) -> int:
  try:
    return int(token)
  except ValueError:
    raise errors.ParseError(f'{token!r} is not an integer.') from None


def parse_matrix(text: str) -> IntMatrix:
  """Parses `1 1 2; 0 2 0; 0 0 3` or `{"rows": .., "cols": .., "data": ..}`."""
  text = text.strip()
  if text.startswith('{'):
    try:
      obj = json.loads(text)
      data = obj['data']
      expected = (int(obj['rows']), int(obj['cols']))
    except (ValueError, KeyError, TypeError) as e:
      raise errors.ParseError(f'Malformed JSON matrix: {e}') from None
    if not isinstance(data, list) or not all(
        isinstance(row, list) for row in data):
      raise errors.ParseError('JSON matrix `data` must be a list of rows.')
    m = IntMatrix([[_parse_int(str(x)) for x in row] for row in data])
    if m.shape != expected:
      raise errors.ParseError(
          f'Declared shape {expected} does not match data shape {m.shape}.')
    return m
  if not text:
    raise errors.ParseError('Empty matrix.')
  rows = []
  for chunk in text.split(';'):
    tokens = chunk.split()
    if not tokens:
      raise errors.ParseError(f'Empty row in {text!r}.')
    rows.append([_parse_int(t) for t in tokens])
  width = len(rows[0])
  if any(len(r) != width for r in rows):
    raise errors.ParseError(f'Ragged rows in {text!r}.')
  return IntMatrix(rows)
