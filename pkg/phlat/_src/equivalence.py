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

"""Hermite and permutation-Hermite (PH) equivalence.

`B` and `C` are Hermite equivalent when `U·B = C` for some `U` in `GL(n, Z)`,
and PH-equivalent when `U·B = C·P` for some permutation matrix `P` as well.

Currently implements the following:
- `hermite_equivalent`, through the two Hermite reduction transforms
- `ph_equivalent`, an orbit search over `S_n` pruned by the tuple of
  column-deleted cokernels
- `single_p_test`, the one-permutation integrality test used when those
  cokernels are pairwise distinct
- Column moves between standard forms `(I a; 0 d)` and their closure

"""

import collections
import itertools
import math
from typing import FrozenSet, Iterator, Optional, Sequence, Tuple

from phlat._src import errors
from phlat._src import exact_linalg
from phlat._src import invariants
from phlat._src import settings
from phlat._src import structure


IntMatrix = exact_linalg.IntMatrix
Fraction = exact_linalg.Fraction
Permutation = structure.Permutation
Column = Tuple[int, ...]

# `U·B = C·P` with `P = IntMatrix.permutation(perm)`.
Certificate = collections.namedtuple('Certificate', ['u', 'perm'])
SinglePResult = collections.namedtuple('SinglePResult',
                                       ['certificate', 'perm', 'witnesses'])


def hermite_equivalent(b: IntMatrix, c: IntMatrix) -> Optional[IntMatrix]:
  """Returns `U` unimodular with `U·B = C`, or None."""
  if b.shape != c.shape:
    raise errors.ShapeError(
        f'Cannot compare a {b.shape} matrix with a {c.shape} matrix.')
  hb, ub = exact_linalg.hnf(b)
  hc, uc = exact_linalg.hnf(c)
  if hb != hc:
    return None
  return exact_linalg.unimodular_inverse(uc) @ ub


def _check_pair(b: IntMatrix, c: IntMatrix, max_n: int) -> None:
  structure.require_ns(b)
  structure.require_ns(c)
  if b.shape != c.shape:
    raise errors.ShapeError(
        f'Cannot compare a {b.shape} matrix with a {c.shape} matrix.')
  structure.check_size(b.rows, max_n, 'PH-equivalence search')


def _tuple_perms(tuple_b, tuple_c) -> Iterator[Permutation]:
  """Permutations with `tuple_b[p[j]] == tuple_c[j]` for every j."""
  n = len(tuple_b)
  options = [[k for k in range(n) if tuple_b[k] == tuple_c[j]]
             for j in range(n)]
  for perm in itertools.product(*options):
    if len(set(perm)) == n:
      yield perm


def _certificate(b: IntMatrix, c: IntMatrix, perm: Permutation) -> Certificate:
  cp = c @ IntMatrix.permutation(perm)
  u = (cp @ exact_linalg.rational_inverse(b)).to_int()
  return Certificate(u, perm)


def ph_equivalent(
    b: IntMatrix,
    c: IntMatrix,
    max_n: int = settings.LIMITS['max_ph_n']) -> Optional[Certificate]:
  """Decides PH-equivalence of two NS matrices.

  A permutation can only work if it carries the tuple of column-deleted
  cokernels of `C` onto that of `B`, so only those permutations are tried.

  Args:
    b: an NS matrix.
    c: an NS matrix of the same size.
    max_n: largest size searched.

  Returns:
    `Certificate(u, perm)` with `U·B = C·P`, or None.
  """
  _check_pair(b, c, max_n)
  if abs(exact_linalg.determinant(b)) != abs(exact_linalg.determinant(c)):
    return None
  target = exact_linalg.hermite_form(b)
  for perm in _tuple_perms(invariants.j_tuple(b), invariants.j_tuple(c)):
    if structure.act(c, perm) == target:
      return _certificate(b, c, perm)
  return None


def single_p_test(b: IntMatrix, c: IntMatrix) -> SinglePResult:
  """Tests `C·P·B^-1` for integrality at the one admissible permutation.

  Args:
    b: an NS matrix whose column-deleted cokernels are pairwise distinct.
    c: an NS matrix whose tuple of column-deleted cokernels is a
      rearrangement of that of `b`.

  Returns:
    `SinglePResult(certificate, perm, witnesses)`. `witnesses` lists the
    non-integral entries of `C·P·B^-1` as `((row, col), value)`; the
    certificate is None exactly when it is non-empty.

  Raises:
    NotApplicableError: if the tuples do not force a single permutation.
  """
  _check_pair(b, c, settings.LIMITS['max_ph_n'])
  tuple_b, tuple_c = invariants.j_tuple(b), invariants.j_tuple(c)
  if len(set(tuple_b)) != len(tuple_b):
    raise errors.NotApplicableError(
        f'Column-deleted cokernels of {b} are not pairwise distinct.')
  perm = next(_tuple_perms(tuple_b, tuple_c), None)
  if perm is None:
    raise errors.NotApplicableError(
        f'Column-deleted cokernels of {c} do not rearrange those of {b}.')
  product = (c @ IntMatrix.permutation(perm)
             ) @ exact_linalg.rational_inverse(b)
  witnesses = product.non_integral_entries()
  if witnesses:
    return SinglePResult(None, perm, witnesses)
  return SinglePResult(Certificate(product.to_int(), perm), perm, [])


def canonical_representative(c: IntMatrix) -> IntMatrix:
  """The least `HNF(C·P)` over all P, by `structure.canonical_key`."""
  structure.require_ns(c)
  return min((structure.act(c, perm)
              for perm in itertools.permutations(range(c.rows))),
             key=structure.canonical_key)


def _check_column(a: Sequence[int], d: int) -> None:
  if d < 2:
    raise errors.BadColumnError(f'Standard forms need d > 1; got {d}.')
  if math.gcd(d, *a) != 1:
    raise errors.BadColumnError(f'gcd({d}, {tuple(a)}) must be 1.')


def realizable_column(a: Sequence[int], d: int,
                      perm: Permutation) -> Optional[Column]:
  """The column `a'` with `HNF(B_a·P^-1) = B_a'`, when it has 1-block n-1.

  Args:
    a: the last column of `B_a` above `d`.
    d: the determinant.
    perm: a permutation of `range(len(a) + 1)`.

  Returns:
    `a'` reduced to `[0, d)`, or None when `a_perm(n-1)` is not a unit mod d.
  """
  _check_column(a, d)
  last = len(a)
  if len(perm) != last + 1:
    raise errors.BadColumnError(
        f'{tuple(perm)} does not act on {last + 1} columns.')
  pivot = perm[last]
  if pivot == last:
    return tuple(a[perm[t]] % d for t in range(last))
  if math.gcd(a[pivot], d) != 1:
    return None
  inv = pow(a[pivot], -1, d)
  moved = structure.inverse(perm)[last]
  return tuple(inv if t == moved else (-a[perm[t]] * inv) % d
               for t in range(last))


def column_orbit(a: Sequence[int], d: int) -> FrozenSet[Column]:
  """All columns `a'` with `B_a'` PH-equivalent to `B_a`, in every order."""
  _check_column(a, d)
  last = len(a)
  start = tuple(sorted(x % d for x in a))
  seen = {start}
  queue = collections.deque([start])
  while queue:
    current = queue.popleft()
    for j in range(last):
      swap = list(range(last + 1))
      swap[j], swap[last] = last, j
      moved = realizable_column(current, d, tuple(swap))
      if moved is None:
        continue
      key = tuple(sorted(moved))
      if key not in seen:
        seen.add(key)
        queue.append(key)
  return frozenset(
      perm for multiset in seen for perm in itertools.permutations(multiset))


def orbit_canonical(a: Sequence[int], d: int) -> structure.StandardForm:
  """Lexicographically least standard-ordered member of `column_orbit`."""
  forms = []
  for column in column_orbit(a, d):
    try:
      forms.append(structure.StandardForm(d, column))
    except errors.BadColumnError:
      continue
  return min(forms, key=lambda f: f.a)

