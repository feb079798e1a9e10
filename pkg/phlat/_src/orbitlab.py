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

"""Orbits of rectangular matrices over `Z_p` under weighted permutations.

`W(n)` (permutation matrices times invertible diagonals) acts on the left of
`F(n, k)`, the n×k matrices with some invertible set of k rows, and `GL(k)`
acts on the right. Over a field the right action only changes the basis of
the column space, so an orbit is a `W(n)`-orbit of k-dimensional subspaces.
Subspaces are keyed by the reduced row echelon form of `M^T`.

`F(n, k)` is stratified by the number i of invertible k-row subsets, and the
map `M ↦ basis of ker M^T` is a bijection of orbit spaces that preserves i
and the stabilizers in `S_n`.

"""
# pylint: disable=invalid-name

import collections
import functools
import itertools
import math
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from absl import logging
import attr
from phlat._src import duality
from phlat._src import errors
from phlat._src import exact_linalg
from phlat._src import invariants
from phlat._src import settings
from phlat._src import structure
import sympy
from sympy.polys.matrices import DomainMatrix


IntMatrix = exact_linalg.IntMatrix
Permutation = structure.Permutation
Key = Tuple[Tuple[int, ...], ...]


def _check_entries(instance, attribute, value):
  del attribute
  if instance.modulus < 2:
    raise errors.RangeError(f'The modulus must be at least 2; got '
                            f'{instance.modulus}.')
  if any(not 0 <= x < instance.modulus for row in value for x in row):
    raise errors.RangeError(f'Entries must lie in [0, {instance.modulus}).')
  if len({len(row) for row in value}) > 1:
    raise errors.ShapeError('Rows have different lengths.')


@attr.define(frozen=True)
class ModMatrix:
  """A matrix over `Z_d` with entries stored in `[0, d)`."""

  modulus: int
  data: Key = attr.field(
      converter=lambda rows: tuple(tuple(r) for r in rows),
      validator=_check_entries)

  @classmethod
  def from_rows(cls, rows: Sequence[Sequence[int]], modulus: int
                ) -> 'ModMatrix':
    return cls(modulus, [[int(x) % modulus for x in row] for row in rows])

  @property
  def rows(self) -> int:
    return len(self.data)

  @property
  def cols(self) -> int:
    return len(self.data[0]) if self.data else 0

  @property
  def shape(self) -> Tuple[int, int]:
    return self.rows, self.cols

  @property
  def T(self) -> 'ModMatrix':
    return ModMatrix(self.modulus, list(zip(*self.data)))

  def __getitem__(self, index: Tuple[int, int]) -> int:
    i, j = index
    return self.data[i][j]

  def __matmul__(self, other: 'ModMatrix') -> 'ModMatrix':
    if self.modulus != other.modulus or self.cols != other.rows:
      raise errors.ShapeError(
          f'Cannot multiply {self.shape} mod {self.modulus} by {other.shape} '
          f'mod {other.modulus}.')
    return ModMatrix.from_rows(
        [[sum(a * b for a, b in zip(row, col)) for col in zip(*other.data)]
         for row in self.data], self.modulus)

  def select_rows(self, rows: Sequence[int]) -> 'ModMatrix':
    return ModMatrix(self.modulus, [self.data[i] for i in rows])

  def to_int_matrix(self) -> IntMatrix:
    return IntMatrix(self.data)

  def tolist(self) -> List[List[int]]:
    return [list(row) for row in self.data]

  def is_zero(self) -> bool:
    return not any(any(row) for row in self.data)

  def rref_column_space(self) -> Key:
    """Canonical key of the column space: the nonzero rows of `rref(M^T)`."""
    reduced, pivots = _domain(self.T).rref()
    return _from_domain(reduced, self.modulus).data[:len(pivots)]


@functools.lru_cache(maxsize=None)
def _field(p: int):
  if not sympy.isprime(p):
    raise errors.RangeError(f'Orbit computations need a prime modulus; '
                            f'got {p}.')
  return sympy.GF(p)


def _domain(m: ModMatrix) -> DomainMatrix:
  field = _field(m.modulus)
  return DomainMatrix([[field(x) for x in row] for row in m.data], m.shape,
                      field)


def _from_domain(dm: DomainMatrix, modulus: int) -> ModMatrix:
  return ModMatrix.from_rows(
      [[int(x) for x in row] for row in dm.to_Matrix().tolist()], modulus)


def _from_key(key: Key, p: int) -> ModMatrix:
  """The n×k matrix `R^T` whose column space the key describes."""
  return ModMatrix(p, key).T


def f_index(m: ModMatrix) -> int:
  """Number of k-row subsets of the n×k matrix `m` invertible over `Z_d`."""
  n, k = m.shape
  if n <= k:
    raise errors.ShapeError(f'f_index needs more rows than columns; got '
                            f'{m.shape}.')
  count = 0
  for rows in itertools.combinations(range(n), k):
    det = exact_linalg.determinant(m.select_rows(rows).to_int_matrix())
    count += math.gcd(det, m.modulus) == 1
  return count


def gaussian_binomial(n: int, k: int, p: int) -> int:
  """Number of k-dimensional subspaces of `F_p^n`."""
  numer = math.prod(p**(n - i) - 1 for i in range(k))
  denom = math.prod(p**(i + 1) - 1 for i in range(k))
  return numer // denom


def gl_order(k: int, p: int) -> int:
  return math.prod(p**k - p**i for i in range(k))


def _rref_forms(n: int, k: int, p: int) -> Iterator[Key]:
  for pivots in itertools.combinations(range(n), k):
    free = [(r, c) for r in range(k) for c in range(pivots[r] + 1, n)
            if c not in pivots]
    for values in itertools.product(range(p), repeat=len(free)):
      rows = [[0] * n for _ in range(k)]
      for r, c in enumerate(pivots):
        rows[r][c] = 1
      for (r, c), v in zip(free, values):
        rows[r][c] = v
      yield tuple(tuple(row) for row in rows)


def _permute_key(key: Key, perm: Permutation) -> List[List[int]]:
  """Columns of `R` move as rows of `M`: column j goes to `perm[j]`."""
  rows = []
  for row in key:
    moved = [0] * len(row)
    for j, x in enumerate(row):
      moved[perm[j]] = x
    rows.append(moved)
  return rows


def _act_key(key: Key, perm: Permutation, weights: Sequence[int],
             p: int) -> Key:
  """Key of `P·D·M` where `D = diag(weights)`."""
  scaled = [[x * w for x, w in zip(row, weights)] for row in key]
  moved = _permute_key(tuple(tuple(r) for r in scaled), perm)
  return ModMatrix.from_rows(moved, p).T.rref_column_space()


def _generators(n: int, p: int) -> List[Tuple[Permutation, Tuple[int, ...]]]:
  """A transposition, an n-cycle and a scaling by a primitive root."""
  identity = tuple(range(n))
  ones = (1,) * n
  moves = [((1, 0) + identity[2:], ones),
           (tuple((j + 1) % n for j in range(n)), ones)]
  if p > 2:
    root = int(sympy.primitive_root(p))
    moves.append((identity, (root,) + ones[1:]))
  return moves


def _check_shape(n: int, k: int) -> None:
  if not n > k >= 1:
    raise errors.RangeError(f'Need n > k >= 1; got n = {n}, k = {k}.')


OrbitRecord = collections.namedtuple(
    'OrbitRecord', ['representative', 'f_index', 'subspaces', 'matrices'])


@attr.define(frozen=True)
class OrbitCensus:
  """Orbits of `W(n) × GL(k)` on `F(n, k)` over `Z_p`.

  Attributes:
    n: rows.
    k: columns.
    p: the prime modulus.
    method: 'full' for all of `F(n, k)`, 'max_stratum' for the top stratum.
    orbits: one record per orbit, with the column-space and matrix counts.
    index: canonical key to orbit number.
  """

  n: int
  k: int
  p: int
  method: str
  orbits: Tuple[OrbitRecord, ...] = attr.field(converter=tuple)
  index: Mapping[Key, int] = attr.field(eq=False, repr=False)

  def strata(self) -> Dict[int, List[OrbitRecord]]:
    grouped = collections.defaultdict(list)
    for orbit in self.orbits:
      grouped[orbit.f_index].append(orbit)
    return dict(sorted(grouped.items()))

  def orbit_count(self, i: int) -> int:
    return len(self.strata().get(i, []))

  @property
  def matrix_count(self) -> int:
    return sum(orbit.matrices for orbit in self.orbits)

  def key_of(self, m: ModMatrix) -> Key:
    if self.method == 'max_stratum':
      return normalized_key(m)
    return m.rref_column_space()

  def orbit_id(self, m: ModMatrix) -> int:
    if m.shape != (self.n, self.k) or m.modulus != self.p:
      raise errors.ShapeError(
          f'{m.shape} mod {m.modulus} does not belong to this census.')
    key = self.key_of(m)
    if key not in self.index:
      raise errors.NotInFError(f'{m.tolist()} is not covered by this census.')
    return self.index[key]

  def to_json(self) -> dict:
    return {
        'n': self.n,
        'k': self.k,
        'p': self.p,
        'method': self.method,
        'matrices': self.matrix_count,
        'strata': {
            str(i): {
                'orbits': len(records),
                'matrices': sum(r.matrices for r in records),
                'sizes': [r.matrices for r in records],
            } for i, records in self.strata().items()
        },
        'orbits': [{
            'representative': r.representative.tolist(),
            'f_index': r.f_index,
            'subspaces': r.subspaces,
            'matrices': r.matrices,
        } for r in self.orbits],
    }


def _closure(start: Key, step, seen: Dict[Key, int], label: int) -> int:
  """Breadth-first closure of `start`, labelling every key reached."""
  seen[start] = label
  queue = collections.deque([start])
  size = 0
  while queue:
    key = queue.popleft()
    size += 1
    for nxt in step(key):
      if nxt not in seen:
        seen[nxt] = label
        queue.append(nxt)
  return size


def _log_strata(census: OrbitCensus) -> None:
  for i, records in census.strata().items():
    logging.info('F_%d(%d, %d) over Z_%d: %d orbits, %d matrices.', i,
                 census.n, census.k, census.p, len(records),
                 sum(r.matrices for r in records))


def orbit_census(n: int, k: int, p: int,
                 budget: int = settings.LIMITS['orbit_budget']
                 ) -> OrbitCensus:
  """All orbits of `F(n, k)` over `Z_p`, stratified by `f_index`."""
  _check_shape(n, k)
  _field(p)
  total = gaussian_binomial(n, k, p)
  if total > budget:
    logging.warning('Orbit census (%d, %d, %d) needs %d subspaces; the budget '
                    'is %d.', n, k, p, total, budget)
    raise errors.BudgetError(
        f'F({n}, {k}) over Z_{p} has {total} column spaces; the budget is '
        f'{budget}.')
  moves = _generators(n, p)

  def step(key):
    return (_act_key(key, perm, weights, p) for perm, weights in moves)

  seen = {}
  orbits = []
  for key in _rref_forms(n, k, p):
    if key in seen:
      continue
    size = _closure(key, step, seen, len(orbits))
    rep = _from_key(key, p)
    orbits.append(OrbitRecord(rep, f_index(rep), size, size * gl_order(k, p)))
  census = OrbitCensus(n, k, p, 'full', orbits, seen)
  _log_strata(census)
  return census


def normalized_key(m: ModMatrix) -> Key:
  """Torus-normalized `X` with `M ~ (X; I_k)` and first row and column 1.

  Defined on the top stratum, where every k-row subset is invertible; there
  the torus acts freely modulo scalars, so `X` determines the torus orbit of
  the column space.
  """
  n, k = m.shape
  if f_index(m) != math.comb(n, k):
    raise errors.NotInFError(
        f'{m.tolist()} is not in the top stratum F_{math.comb(n, k)}.')
  p = m.modulus
  bottom = _domain(m.select_rows(range(n - k, n)))
  top = _domain(m.select_rows(range(n - k)))
  y = _from_domain(top * bottom.inv(), p).data
  col_scale = [pow(y[0][j], -1, p) for j in range(k)]
  y = [[x * s % p for x, s in zip(row, col_scale)] for row in y]
  return tuple(
      tuple(x * pow(row[0], -1, p) % p for x in row) for row in y)


def _u_matrix(x: Key, p: int) -> ModMatrix:
  k = len(x[0])
  identity = [[int(i == j) for j in range(k)] for i in range(k)]
  return ModMatrix.from_rows(list(x) + identity, p)


def _permute_rows(m: ModMatrix, perm: Permutation) -> ModMatrix:
  rows = [None] * m.rows
  for j, row in enumerate(m.data):
    rows[perm[j]] = row
  return ModMatrix(m.modulus, rows)


def max_stratum_census(n: int, k: int, p: int,
                       budget: int = settings.LIMITS['orbit_budget']
                       ) -> OrbitCensus:
  """Orbits of the top stratum `F_C(n,k)(n, k)` through normalized `X`.

  Every top-stratum orbit meets a normalized `(X; I_k)`, and the torus acts
  freely modulo scalars, so each normalized `X` stands for `(p-1)^(n-1)`
  column spaces. Only `S_n` then has to act.
  """
  _check_shape(n, k)
  _field(p)
  free = (n - k - 1) * (k - 1)
  candidates = (p - 1)**free
  if candidates > budget:
    logging.warning('Top stratum census (%d, %d, %d) needs %d candidates; the '
                    'budget is %d.', n, k, p, candidates, budget)
    raise errors.BudgetError(
        f'Top stratum of F({n}, {k}) over Z_{p} has {candidates} candidates; '
        f'the budget is {budget}.')
  top = math.comb(n, k)
  reps = []
  for values in itertools.product(range(1, p), repeat=free):
    it = iter(values)
    x = tuple(
        tuple(1 if i == 0 or j == 0 else next(it) for j in range(k))
        for i in range(n - k))
    if f_index(_u_matrix(x, p)) == top:
      reps.append(x)
  perms = _generators(n, p)[:2]

  def step(key):
    m = _u_matrix(key, p)
    return (normalized_key(_permute_rows(m, perm)) for perm, _ in perms)

  seen = {}
  orbits = []
  torus = (p - 1)**(n - 1)
  for x in reps:
    if x in seen:
      continue
    size = _closure(x, step, seen, len(orbits))
    orbits.append(OrbitRecord(_u_matrix(x, p), top, size * torus,
                              size * torus * gl_order(k, p)))
  census = OrbitCensus(n, k, p, 'max_stratum', orbits, seen)
  _log_strata(census)
  return census


def _is_top(m: ModMatrix) -> bool:
  return f_index(m) == math.comb(*m.shape)


def stabilizer(m: ModMatrix,
               max_n: int = settings.LIMITS['max_ph_n'],
               budget: int = settings.LIMITS['orbit_budget']
               ) -> Tuple[Permutation, ...]:
  """`{π ∈ S_n : P_π·D·M·g = M for some diagonal D and g ∈ GL(k)}`."""
  n, k = m.shape
  _check_shape(n, k)
  structure.check_size(n, max_n, 'Stabilizer search')
  p = m.modulus
  _field(p)
  perms = list(itertools.permutations(range(n)))
  if _is_top(m):
    target = normalized_key(m)
    return tuple(perm for perm in perms
                 if normalized_key(_permute_rows(m, perm)) == target)
  work = len(perms) * (p - 1)**(n - 1)
  if work > budget:
    logging.warning('Stabilizer search needs %d steps; the budget is %d.',
                    work, budget)
    raise errors.BudgetError(
        f'Stabilizer search needs {work} steps; the budget is {budget}.')
  key = m.rref_column_space()
  result = []
  for perm in perms:
    for rest in itertools.product(range(1, p), repeat=n - 1):
      if _act_key(key, perm, (1,) + rest, p) == key:
        result.append(perm)
        break
  return tuple(result)


def same_orbit(m: ModMatrix, m2: ModMatrix,
               budget: int = settings.LIMITS['orbit_budget']) -> bool:
  """Whether `m` and `m2` lie in one `W(n) × GL(k)` orbit."""
  if m.shape != m2.shape or m.modulus != m2.modulus:
    return False
  n, k = m.shape
  p = m.modulus
  if _is_top(m) != _is_top(m2) or f_index(m) != f_index(m2):
    return False
  if _is_top(m):
    target = normalized_key(m2)
    perms = _generators(n, p)[:2]

    def step(key):
      u = _u_matrix(key, p)
      return (normalized_key(_permute_rows(u, perm)) for perm, _ in perms)

    start = normalized_key(m)
  else:
    target = m2.rref_column_space()
    moves = _generators(n, p)

    def step(key):
      return (_act_key(key, perm, weights, p) for perm, weights in moves)

    start = m.rref_column_space()
  seen = {start}
  queue = collections.deque([start])
  while queue:
    key = queue.popleft()
    if key == target:
      return True
    for nxt in step(key):
      if nxt not in seen:
        if len(seen) >= budget:
          raise errors.BudgetError(
              f'Orbit search exceeded its budget of {budget} keys.')
        seen.add(nxt)
        queue.append(nxt)
  return False


def appendix_a_dual(m: ModMatrix) -> ModMatrix:
  """An n×(n-k) matrix whose columns are a basis of `ker M^T`."""
  n, k = m.shape
  _check_shape(n, k)
  dm = _domain(m)
  if dm.rank() != k:
    raise errors.NotInFError(f'{m.tolist()} has rank below {k}, so it is not '
                             f'in F({n}, {k}).')
  basis = _from_domain(dm.transpose().nullspace(), m.modulus)
  return basis.T


# Matrices B(X) and the duality experiment.


def _check_x(x: Sequence[Sequence[int]], d: int) -> Tuple[Tuple[int, ...], ...]:
  if d < 2:
    raise errors.BadXError(f'The modulus must be at least 2; got {d}.')
  rows = tuple(tuple(int(v) for v in row) for row in x)
  if not rows or not rows[0] or len({len(r) for r in rows}) != 1:
    raise errors.BadXError(f'X must be a nonempty rectangle; got {x}.')
  for i, row in enumerate(rows):
    if math.gcd(exact_linalg.content(row), d) != 1:
      raise errors.BadXError(f'Row {i} of X is not unimodular modulo {d}.')
  for j, col in enumerate(zip(*rows)):
    if math.gcd(exact_linalg.content(col), d) != 1:
      raise errors.BadXError(f'Column {j} of X is not unimodular modulo {d}.')
  return rows


def b_of_x(x: Sequence[Sequence[int]], d: int) -> IntMatrix:
  """`B(X) = [[I_{n-k}, X], [0, d·I_k]]`."""
  x = _check_x(x, d)
  m, k = len(x), len(x[0])
  n = m + k
  rows = []
  for i in range(n):
    if i < m:
      rows.append([int(i == j) for j in range(m)] + list(x[i]))
    else:
      rows.append([0] * m + [d * int(i - m == j) for j in range(k)])
  return IntMatrix(rows)


def m_of_x(x: Sequence[Sequence[int]], d: int) -> ModMatrix:
  """`M(X) = (-X; I_k)` over `Z_d`."""
  x = _check_x(x, d)
  k = len(x[0])
  identity = [[int(i == j) for j in range(k)] for i in range(k)]
  return ModMatrix.from_rows([[-v for v in row] for row in x] + identity, d)


def n_of_x(x: Sequence[Sequence[int]], d: int) -> ModMatrix:
  """`N(X) = (I_{n-k}; X^T)` over `Z_d`."""
  x = _check_x(x, d)
  m = len(x)
  identity = [[int(i == j) for j in range(m)] for i in range(m)]
  return ModMatrix.from_rows(identity + [list(col) for col in zip(*x)], d)


@attr.define(frozen=True)
class DualityReport:
  """Lattice and orbit comparisons for `B(X)` and `B(X')`.

  `subset_match` says the `J(B_Ω)` agree under some permutation; `verdict`
  decides `𝒥(B) ≅ 𝒥(B')`. The `op_` fields do the same for the
  opposites. Orbit fields are None unless the modulus is prime.
  """

  b: IntMatrix
  b_prime: IntMatrix
  subset_match: bool
  verdict: str
  op_subset_match: bool
  op_verdict: str
  m_same_orbit: Optional[bool]
  n_same_orbit: Optional[bool]
  chain_holds: bool

  def to_json(self) -> dict:
    return {
        'b': self.b.tolist(),
        'b_prime': self.b_prime.tolist(),
        'subset_match': self.subset_match,
        'verdict': self.verdict,
        'op_subset_match': self.op_subset_match,
        'op_verdict': self.op_verdict,
        'm_same_orbit': self.m_same_orbit,
        'n_same_orbit': self.n_same_orbit,
        'chain_holds': self.chain_holds,
    }


def duality_experiment(x: Sequence[Sequence[int]],
                       x_prime: Sequence[Sequence[int]],
                       d: int) -> DualityReport:
  """Compares `𝒥(B(X))` with `𝒥(B(X'))`, and the same for the opposites.

  Over a prime modulus the chain
  `𝒥(B) ≅ 𝒥(B') ⇔ M(X) ~ M(X') ⇒ N(X) ~ N(X') ⇒ 𝒥(B^op) ≅ 𝒥(B'^op)`
  is checked; otherwise only the last implication from the lattices themselves.
  """
  b, b2 = b_of_x(x, d), b_of_x(x_prime, d)
  if b.shape != b2.shape:
    raise errors.BadXError(f'X and X\' have different shapes: {b.shape} and '
                           f'{b2.shape}.')
  bop = duality.opposite(b).bop
  bop2 = duality.opposite(b2).bop
  subset = invariants.lattice_match(b, b2)
  decided = invariants.lattice_match(b, b2, exhaustive=True)
  op_subset = invariants.lattice_match(bop, bop2)
  op_decided = invariants.lattice_match(bop, bop2, exhaustive=True)
  iso = decided.verdict == invariants.Verdict.DECIDED_ISO
  op_iso = op_decided.verdict == invariants.Verdict.DECIDED_ISO
  m_same = n_same = None
  chain = op_iso or not iso
  if sympy.isprime(d):
    m_same = same_orbit(m_of_x(x, d), m_of_x(x_prime, d))
    n_same = same_orbit(n_of_x(x, d), n_of_x(x_prime, d))
    chain = chain and iso == m_same and (n_same or not m_same)
    chain = chain and (op_iso or not n_same)
  if not chain:
    logging.warning('Duality chain broken for X = %s, X\' = %s, d = %d.', x,
                    x_prime, d)
  return DualityReport(b, b2, subset.perm is not None, decided.verdict,
                       op_subset.perm is not None, op_decided.verdict, m_same,
                       n_same, chain)
