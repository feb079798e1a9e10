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

"""The opposite matrix and the dual-side tests built on it.

For a weakly nonsingular (NS) matrix `B`, let `m(i)` be the least positive
integer clearing the denominators of row `i` of `B^-1` and `Δ = diag(m)`. The
opposite is `B^op = (Δ·B^-1)^T`, so that `(B^op)^T·B = Δ`.

Currently implements the following:
- `opposite` and the involution self-test
- Splitting of `0 -> J(B^op) -> ⊕Z_m(i) -> J(B) -> 0` and super-splitting
- The five equivalent conditions on `B^op` when `B` has a 1-block of size n-1
- Dual-compatibility and dual-conjugacy of weakly indecomposable matrices

"""

import itertools
import math
from typing import Dict, List, Sequence, Tuple

import attr
from phlat._src import errors
from phlat._src import exact_linalg
from phlat._src import structure
import sympy
from sympy.ntheory import residue_ntheory


IntMatrix = exact_linalg.IntMatrix
AbelianGroup = exact_linalg.AbelianGroup
StandardForm = structure.StandardForm


@attr.define(frozen=True)
class DualData:
  """`B`, its opposite and the diagonal of `Δ`."""

  b: IntMatrix
  bop: IntMatrix
  m: Tuple[int, ...] = attr.field(converter=tuple)

  @property
  def delta(self) -> IntMatrix:
    return IntMatrix.diagonal(self.m)


def opposite(b: IntMatrix) -> DualData:
  structure.require_ns(b)
  inv = exact_linalg.rational_inverse(b)
  m = tuple(math.lcm(*(x.denominator for x in inv.row(i)))
            for i in range(b.rows))
  bop = inv.scale_rows(m).T.to_int()
  return DualData(b, bop, m)


def involution_check(b: IntMatrix) -> bool:
  """Checks `(B^op)^op = B` and that both sides share the same `m` multiset."""
  first = opposite(b)
  second = opposite(first.bop)
  return second.bop == b and sorted(second.m) == sorted(first.m)


def j_group(b: IntMatrix) -> AbelianGroup:
  """`J(B)`, the torsion of `Z^n / rowspace(B)`."""
  return exact_linalg.snf(b)


def i_invariant(b: IntMatrix) -> AbelianGroup:
  """`I(B)`, computed as `J(B^op)`."""
  return j_group(opposite(b).bop)


def sequence_splits(b: IntMatrix) -> bool:
  dual = opposite(b)
  middle = AbelianGroup.from_orders(dual.m)
  return middle == j_group(b).direct_sum(j_group(dual.bop))


def super_splits(b: IntMatrix) -> bool:
  """Whether `rowspace(B) + rowspace(B^op) = Z^n`."""
  dual = opposite(b)
  stacked = IntMatrix(b.data + dual.bop.data)
  return exact_linalg.cokernel(stacked).torsion.is_trivial


def _pairwise_coprime(values: Sequence[int]) -> bool:
  return all(math.gcd(x, y) == 1 for x, y in itertools.combinations(values, 2))


def large_block_conditions(b: IntMatrix) -> Dict[str, bool]:
  """Evaluates five conditions that agree when `B` has a 1-block of size n-1.

  Args:
    b: an NS matrix whose maximal 1-block size is `n - 1`.

  Returns:
    A dict with keys `op_has_large_block`, `op_j_cyclic`, `same_determinant`,
    `m_is_square_of_cyclic` and `coprime_quotients`.

  Raises:
    NotApplicableError: if the maximal 1-block size of `b` is not `n - 1`.
  """
  n = b.rows
  if structure.max_one_block(b) != n - 1:
    raise errors.NotApplicableError(
        f'Matrix {b} does not have maximal 1-block size {n - 1}.')
  dual = opposite(b)
  d = abs(exact_linalg.determinant(b))
  form = structure.to_standard_form(b)
  quotients = [d // math.gcd(d, x) for x in form.a]
  return {
      'op_has_large_block': structure.max_one_block(dual.bop) == n - 1,
      'op_j_cyclic': j_group(dual.bop).is_cyclic,
      'same_determinant': abs(exact_linalg.determinant(dual.bop)) == d,
      'm_is_square_of_cyclic': (
          AbelianGroup.from_orders(dual.m) == AbelianGroup.from_orders((d, d))),
      'coprime_quotients': _pairwise_coprime(quotients),
  }


def standard_dual_compatible(a: Sequence[int], d: int) -> bool:
  """Dual-compatibility read off the standard form `(I a; 0 d)`."""
  quotients = [d // math.gcd(d, x) for x in a]
  return (_pairwise_coprime(quotients) and math.prod(quotients) == d and
          all(q != 1 for q in quotients))


def conjugacy_residue(a: Sequence[int], d: int) -> int:
  """`Σ a_i^2 / (a_i, d) mod d`; dual-conjugate forms give `d - 1`."""
  return sum(x * x // math.gcd(d, x) for x in a) % d


def standard_dual_conjugate(a: Sequence[int], d: int) -> bool:
  return standard_dual_compatible(a, d) and conjugacy_residue(a, d) == (-1) % d


def super_split_sufficient(a: Sequence[int], d: int) -> bool:
  """Whether `1 + Σ a_i^2/(d, a_i)` is prime to `d`.

  This forces `(I a; 0 d)` to super-split. When every `a_i` is prime to `d` it
  is also necessary.
  """
  return math.gcd(1 + sum(x * x // math.gcd(d, x) for x in a), d) == 1


def _restricted_form(b: IntMatrix) -> StandardForm:
  n = b.rows
  structure.require_ns(b)
  if not structure.is_weakly_indecomposable(b):
    raise errors.NotApplicableError(f'Matrix {b} is weakly decomposable.')
  if structure.max_one_block(b) != n - 1:
    raise errors.NotApplicableError(
        f'Matrix {b} does not have maximal 1-block size {n - 1}.')
  return structure.to_standard_form(b)


def is_dual_compatible(b: IntMatrix) -> bool:
  """`𝒥(B) ≅ 𝒥(B^op)` for weakly indecomposable `B` with 1-block n-1."""
  form = _restricted_form(b)
  return standard_dual_compatible(form.a, form.d)


def is_dual_conjugate(b: IntMatrix) -> bool:
  """`B` is PH-equivalent to `B^op`; under the restriction also Hermite."""
  form = _restricted_form(b)
  return standard_dual_conjugate(form.a, form.d)


def block_partition(a: Sequence[int], d: int) -> List[int]:
  """The block orders `d(i) = d/(d, a_i)` of a dual-compatible form."""
  if not standard_dual_compatible(a, d):
    raise errors.NotApplicableError(
        f'Standard form a={tuple(a)}, d={d} is not dual-compatible.')
  return [d // math.gcd(d, x) for x in a]


def partition_admits_conjugate(blocks: Sequence[int]) -> bool:
  """Local solvability of the dual-conjugacy congruence for given blocks.

  For each block `d(i)` and each prime power `q^e` exactly dividing it,
  `-d/d(i)` must be a square modulo `q^e`.

  Args:
    blocks: pairwise coprime block orders, each larger than 1.

  Returns:
    Whether some standard form with these blocks is dual-conjugate.
  """
  if not _pairwise_coprime(blocks) or any(x < 2 for x in blocks):
    raise errors.BadColumnError(
        f'Blocks {tuple(blocks)} must be pairwise coprime and larger than 1.')
  d = math.prod(blocks)
  for block in blocks:
    for q, e in sympy.factorint(block).items():
      modulus = q**e
      if not residue_ntheory.is_quad_residue((-(d // block)) % modulus,
                                             modulus):
        return False
  return True


def sufficiency_gaps(n: int, max_d: int) -> List[StandardForm]:
  """Standard forms that super-split although `super_split_sufficient` fails.

  Every such form has some `a_i` sharing a factor with `d`.
  """
  gaps = []
  for d in range(2, max_d + 1):
    for a in itertools.product(range(d), repeat=n - 1):
      if math.gcd(d, *a) != 1:
        continue
      try:
        form = StandardForm(d, a)
      except errors.BadColumnError:
        continue
      if super_split_sufficient(form.a, d):
        continue
      if super_splits(structure.standard_matrix(form)):
        gaps.append(form)
  return gaps
