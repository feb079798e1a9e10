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

"""Cokernels of column-deleted matrices and the lattice they form.

For an NS matrix `B` and a set `Ω` of column indices, `J(B_Ω)` is the torsion
of `Z^|Ω| / P_Ω(rowspace(B))`, where `P_Ω` keeps the coordinates in `Ω`. The
family over all `Ω`, with the projections between them, is the invariant
lattice `𝒥(B)`.

"""

import collections
import math
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from absl import logging
import attr
from phlat._src import errors
from phlat._src import exact_linalg
from phlat._src import settings
from phlat._src import structure


IntMatrix = exact_linalg.IntMatrix
AbelianGroup = exact_linalg.AbelianGroup
Subset = structure.Subset
Permutation = structure.Permutation


class Verdict:
  DECIDED_ISO = 'decided-iso'
  DECIDED_NONISO = 'decided-noniso'
  NECESSARY_ONLY = 'necessary-only'


LatticeMatch = collections.namedtuple('LatticeMatch', ['perm', 'verdict'])
LatticeIsomorphism = collections.namedtuple('LatticeIsomorphism',
                                            ['perm', 'units'])


@attr.define(frozen=True)
class InvariantLattice:
  """All `J(B_Ω)` plus the orders `|J(B)| / |J(B_Ω(i))|`."""

  n: int
  groups: Mapping[Subset, AbelianGroup]
  kernel_orders: Tuple[int, ...] = attr.field(converter=tuple)

  def group(self, members) -> AbelianGroup:
    return self.groups[Subset(self.n, members)]

  @property
  def j(self) -> AbelianGroup:
    return self.group(range(self.n))

  def by_members(self) -> Dict[FrozenSet[int], AbelianGroup]:
    return {s.members: g for s, g in self.groups.items()}

  def to_json(self) -> dict:
    return {
        'n': self.n,
        'groups': {s.label(): list(g.factors) for s, g in self.groups.items()},
        'kernel_orders': list(self.kernel_orders),
    }


def j_sub(b: IntMatrix, omega: Subset) -> AbelianGroup:
  structure.require_ns(b)
  if omega.n != b.cols:
    raise errors.BadSubsetError(
        f'Subset of range({omega.n}) used with a {b.cols}-column matrix.')
  if len(omega) <= 1:
    return AbelianGroup()
  return exact_linalg.cokernel(b.columns(list(omega))).torsion


def j_tuple(b: IntMatrix) -> Tuple[AbelianGroup, ...]:
  """`(J(B_Ω(0)), ..., J(B_Ω(n-1)))`."""
  return tuple(j_sub(b, Subset.omega(b.cols, i)) for i in range(b.cols))


def invariant_lattice(
    b: IntMatrix,
    max_n: int = settings.LIMITS['max_lattice_n']) -> InvariantLattice:
  structure.require_ns(b)
  n = b.cols
  if n > max_n:
    logging.warning('Refusing a %d-column lattice; the limit is %d.', n, max_n)
    raise errors.SizeLimitError(
        f'Invariant lattices are limited to n <= {max_n}; got {n}.')
  groups = {s: j_sub(b, s) for s in Subset.all_subsets(n)}
  total = groups[Subset.full(n)].order
  kernel_orders = tuple(
      total // groups[Subset.omega(n, i)].order for i in range(n))
  return InvariantLattice(n, groups, kernel_orders)


def _matching_perms(lattice: InvariantLattice,
                    other: InvariantLattice):
  """Yields every π with `J(B_Ω) ≅ J(B'_πΩ)` for all Ω.

  Subsets are checked as soon as π is defined on all of their members.
  """
  n = lattice.n
  mine, theirs = lattice.by_members(), other.by_members()
  by_top = collections.defaultdict(list)
  for members in mine:
    if members:
      by_top[max(members)].append(members)
  perm = [None] * n
  used = [False] * n

  def extend(i):
    if i == n:
      yield tuple(perm)
      return
    for target in range(n):
      if used[target]:
        continue
      perm[i] = target
      if all(mine[s] == theirs[frozenset(perm[k] for k in s)]
             for s in by_top[i]):
        used[target] = True
        yield from extend(i + 1)
        used[target] = False
    perm[i] = None

  if mine[frozenset()] == theirs[frozenset()]:
    yield from extend(0)


def _units(m: int) -> List[int]:
  return [u for u in range(1, m + 1) if math.gcd(u, m) == 1]


def _search_units(h: IntMatrix, perm: Permutation, kernel_orders: Sequence[int],
                  scaled_inverse: IntMatrix, det: int,
                  budget: List[int]) -> Optional[Tuple[int, ...]]:
  """Finds units `u` with `e_i ↦ u_i·e'_π(i)` well defined, or None.

  `h` is upper triangular, so row `r` only involves indices `r..n-1` and is
  checked once those are assigned.
  """
  n = h.rows
  free = [i for i in range(n) if kernel_orders[i] > 1]
  pinned = free[-1] if free else None
  u = [1] * n

  def row_vanishes(r):
    w = [0] * n
    for i in range(r, n):
      w[perm[i]] = h[r, i] * u[i]
    return all(
        sum(w[k] * scaled_inverse[k, c] for k in range(n)) % det == 0
        for c in range(n))

  def assign(i):
    if i < 0:
      return True
    choices = [1] if i == pinned else _units(kernel_orders[i])
    for choice in choices:
      budget[0] -= 1
      if budget[0] < 0:
        raise errors.BudgetError('Lattice isomorphism search exceeded its '
                                 'candidate budget.')
      u[i] = choice
      if row_vanishes(i) and assign(i - 1):
        return True
    return False

  return tuple(u) if assign(n - 1) else None


def _lattices(b: IntMatrix, b2: IntMatrix, max_n: int):
  if b.shape != b2.shape:
    raise errors.ShapeError(
        f'Cannot compare a {b.shape} matrix with a {b2.shape} matrix.')
  if b.rows > max_n:
    logging.warning('Refusing a lattice match at n = %d; the limit is %d.',
                    b.rows, max_n)
    raise errors.SizeLimitError(
        f'Lattice matching is limited to n <= {max_n}; got {b.rows}.')
  return invariant_lattice(b), invariant_lattice(b2)


def lattice_isomorphic_exhaustive(
    b: IntMatrix,
    b2: IntMatrix,
    aut_order_limit: int = settings.LIMITS['aut_order_limit'],
    aut_candidate_limit: int = settings.LIMITS['aut_candidate_limit'],
    max_n: int = settings.LIMITS['max_ph_n'],
) -> Optional[LatticeIsomorphism]:
  """Decides `𝒥(B) ≅ 𝒥(B')` through the kernels `ker p_Ω(i) = <e_i>`.

  The lattices are isomorphic iff some isomorphism `φ: J(B) -> J(B')` and
  permutation π satisfy `φ<e_i> = <e'_π(i)>` for all i. Such a φ sends `e_i`
  to `u_i·e'_π(i)` with `u_i` a unit modulo the order of `e_i`, and is well
  defined iff every row relation of `B` maps into `rowspace(B')`. One unit is
  pinned to 1, since scaling by a unit preserves every cyclic subgroup.

  Args:
    b: an NS matrix.
    b2: an NS matrix of the same size.
    aut_order_limit: largest `|J(B)|` searched.
    aut_candidate_limit: largest number of unit assignments tried.
    max_n: largest matrix size.

  Returns:
    A `LatticeIsomorphism(perm, units)`, or None when the lattices differ.
  """
  lattice, other = _lattices(b, b2, max_n)
  order = lattice.j.order
  if order != other.j.order:
    return None
  if order > aut_order_limit:
    logging.warning('|J(B)| = %d exceeds the isomorphism search limit %d.',
                    order, aut_order_limit)
    raise errors.SizeLimitError(
        f'Exhaustive lattice isomorphism is limited to |J(B)| <= '
        f'{aut_order_limit}; got {order}.')
  h = exact_linalg.hermite_form(b)
  det = abs(exact_linalg.determinant(b2))
  inverse = exact_linalg.rational_inverse(b2)
  scaled_inverse = inverse.scale_rows([det] * b2.rows).to_int()
  budget = [aut_candidate_limit]
  for perm in _matching_perms(lattice, other):
    units = _search_units(h, perm, lattice.kernel_orders, scaled_inverse, det,
                          budget)
    if units is not None:
      return LatticeIsomorphism(perm, units)
  return None


def lattice_match(b: IntMatrix,
                  b2: IntMatrix,
                  exhaustive: bool = False,
                  max_n: int = settings.LIMITS['max_ph_n']) -> LatticeMatch:
  """Searches for π with `J(B_Ω) ≅ J(B'_πΩ)` for every Ω.

  When `J(B)` is cyclic a match decides `𝒥(B) ≅ 𝒥(B')`. Otherwise the
  match is only necessary, unless `exhaustive` asks for the kernel search.

  Args:
    b: an NS matrix.
    b2: an NS matrix of the same size.
    exhaustive: decide non-cyclic cases with `lattice_isomorphic_exhaustive`.
    max_n: largest matrix size.

  Returns:
    `LatticeMatch(perm, verdict)`; `perm` is None when nothing matched.
  """
  lattice, other = _lattices(b, b2, max_n)
  perm = next(_matching_perms(lattice, other), None)
  if perm is None:
    return LatticeMatch(None, Verdict.DECIDED_NONISO)
  if lattice.j.is_cyclic:
    return LatticeMatch(perm, Verdict.DECIDED_ISO)
  if not exhaustive:
    return LatticeMatch(perm, Verdict.NECESSARY_ONLY)
  iso = lattice_isomorphic_exhaustive(b, b2, max_n=max_n)
  if iso is None:
    return LatticeMatch(None, Verdict.DECIDED_NONISO)
  return LatticeMatch(iso.perm, Verdict.DECIDED_ISO)


def level_multiset(lattice: InvariantLattice, k: int) -> List[AbelianGroup]:
  """The sorted list of `J(B_Ω)` over `|Ω| = k`."""
  groups = [g for s, g in lattice.groups.items() if len(s) == k]
  return sorted(groups, key=lambda g: g.factors)
