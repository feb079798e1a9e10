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

"""Unit tests for `structure.py`."""

import itertools

from absl.testing import absltest
from absl.testing import parameterized

from phlat._src import errors
from phlat._src import exact_linalg
from phlat._src import structure

IntMatrix = exact_linalg.IntMatrix

_C = IntMatrix([[1, 1, 2], [0, 2, 0], [0, 0, 3]])
_C_PRIME = IntMatrix([[1, 0, 2], [0, 1, 3], [0, 0, 6]])
_EX_114 = IntMatrix([[1, 1, 1], [0, 2, 4], [0, 0, 8]])


class SubsetTest(absltest.TestCase):

  def test_omega_and_order(self):
    self.assertEqual(structure.Subset.omega(3, 1).members, frozenset({0, 2}))
    subsets = structure.Subset.all_subsets(3)
    self.assertLen(subsets, 8)
    self.assertEmpty(subsets[0].members)
    self.assertEqual([len(s) for s in subsets], [0, 1, 1, 1, 2, 2, 2, 3])
    self.assertEqual(subsets[4].label(), '{1,2}')

  def test_bad_subset(self):
    with self.assertRaises(errors.BadSubsetError):
      structure.Subset(3, {0, 3})


class WeaklyTerminalTest(parameterized.TestCase):

  @parameterized.parameters(
      ([[2, 0, 1], [3, 1, 0], [6, 0, 0]], [[1, 1, 2], [0, 2, 0], [0, 0, 3]]),
      ([[1, 0, 2], [0, 1, 3], [0, 0, 6]], [[1, 0, 2], [0, 1, 3], [0, 0, 6]]),
  )
  def test_examples(self, b, expected):
    self.assertEqual(structure.weakly_terminal(IntMatrix(b)),
                     IntMatrix(expected))

  def test_not_ns(self):
    with self.assertRaises(errors.NotNSError):
      structure.weakly_terminal(IntMatrix([[2, 0], [0, 2]]))

  def test_orbit_map_is_an_action(self):
    perms = list(itertools.permutations(range(3)))
    for d in (6, 12, 30):
      for c in structure.enumerate_weakly_terminal(3, d):
        for p in perms:
          cp = structure.act(c, p)
          for q in perms:
            self.assertEqual(
                structure.act(cp, q), structure.act(c, structure.compose(p, q)))

  def test_compose_matches_matrix_product(self):
    for p in itertools.permutations(range(4)):
      q = (2, 0, 3, 1)
      self.assertEqual(
          IntMatrix.permutation(structure.compose(p, q)),
          IntMatrix.permutation(p) @ IntMatrix.permutation(q))
      self.assertEqual(
          structure.compose(p, structure.inverse(p)), (0, 1, 2, 3))


class TerminalTest(parameterized.TestCase):

  @parameterized.parameters(
      (_C, True),
      (_C_PRIME, True),
      (IntMatrix([[2, 1], [0, 3]]), False),
      (IntMatrix([[1, 1, 1], [0, 2, 4], [0, 0, 8]]), True),
      (IntMatrix([[1, 0, 0], [0, 3, 1], [0, 0, 3]]), False),
  )
  def test_is_terminal(self, c, expected):
    self.assertEqual(structure.is_terminal(c), expected)

  @parameterized.parameters((_C_PRIME, 2), (_C, 1),
                            (IntMatrix.identity(4), 4))
  def test_one_block_size(self, c, expected):
    self.assertEqual(structure.one_block_size(c), expected)

  def test_one_block_size_rejects_non_terminal(self):
    with self.assertRaises(errors.NotTerminalError):
      structure.one_block_size(IntMatrix([[2, 1], [1, 1]]))

  def test_terminal_implies_weakly_terminal(self):
    for d in range(1, 21):
      for c in structure.enumerate_weakly_terminal(3, d):
        self.assertEqual(exact_linalg.hermite_form(c), c)
        for p in itertools.permutations(range(3)):
          cp = structure.act(c, p)
          if structure.is_terminal(cp):
            self.assertEqual(exact_linalg.hermite_form(cp), cp)


class OneBlockTest(parameterized.TestCase):

  @parameterized.parameters((_C_PRIME, 2), (_EX_114, 1),
                            (IntMatrix.identity(3), 3), (_C, 2))
  def test_max_one_block(self, b, expected):
    self.assertEqual(structure.max_one_block(b), expected)

  @parameterized.parameters((_C, {1, 2}), (_EX_114, {1}),
                            (IntMatrix.identity(3), {3}))
  def test_class_one_block_sizes(self, b, expected):
    self.assertEqual(structure.class_one_block_sizes(b), expected)

  def test_size_limit(self):
    with self.assertRaises(errors.SizeLimitError):
      structure.class_one_block_sizes(IntMatrix.identity(4), max_n=3)

  def test_max_one_block_is_class_invariant(self):
    for c in structure.enumerate_weakly_terminal(3, 12):
      m = structure.max_one_block(c)
      for p in itertools.permutations(range(3)):
        self.assertEqual(structure.max_one_block(structure.act(c, p)), m)

  @parameterized.parameters(4, 8, 9, 25, 27)
  def test_prime_power_blocks_are_rigid(self, d):
    for c in structure.enumerate_weakly_terminal(3, d):
      if structure.max_one_block(c) == 2:
        self.assertEqual(structure.class_one_block_sizes(c), {2})


class DecomposabilityTest(parameterized.TestCase):

  @parameterized.parameters(
      ([[1, 0, 0, 1], [0, 1, 1, 3], [0, 0, 2, 3], [0, 0, 0, 9]], True),
      ([[1, 0, 0], [0, 1, 2], [0, 0, 5]], False),
      ([[1, 2], [0, 5]], True),
  )
  def test_is_weakly_indecomposable(self, b, expected):
    self.assertEqual(
        structure.is_weakly_indecomposable(IntMatrix(b)), expected)


class StandardFormTest(parameterized.TestCase):

  @parameterized.parameters((_C_PRIME,), (_C,))
  def test_det_six_examples(self, b):
    form = structure.to_standard_form(b)
    self.assertEqual(form, structure.StandardForm(6, (3, 2)))
    self.assertEqual(form.n, 3)

  def test_standard_is_fixed_point(self):
    form = structure.StandardForm(30, (5, 2))
    b = structure.standard_matrix(form)
    self.assertEqual(b, IntMatrix([[1, 0, 5], [0, 1, 2], [0, 0, 30]]))
    self.assertEqual(structure.to_standard_form(b), form)

  def test_errors(self):
    with self.assertRaises(errors.UnimodularError):
      structure.to_standard_form(IntMatrix.identity(3))
    with self.assertRaises(errors.NoLargeBlockError):
      structure.to_standard_form(IntMatrix([[1, 1, 1], [0, 2, 0], [0, 0, 2]]))
    with self.assertRaises(errors.BadColumnError):
      structure.StandardForm(6, (2, 3))
    with self.assertRaises(errors.BadColumnError):
      structure.StandardForm(6, (2, 4))


class EnumerationTest(parameterized.TestCase):

  def test_two_by_two(self):
    got = list(structure.enumerate_weakly_terminal(2, 5))
    self.assertEqual(got, [IntMatrix([[1, a], [0, 5]]) for a in range(1, 5)])

  @parameterized.parameters((2, 1), (3, 1), (4, 1))
  def test_determinant_one(self, n, d):
    self.assertEqual(
        list(structure.enumerate_weakly_terminal(n, d)),
        [IntMatrix.identity(n)])

  def test_three_by_three_count_and_order(self):
    got = list(structure.enumerate_weakly_terminal(3, 5))
    self.assertLen(got, 28)
    self.assertLen(set(got), 28)
    keys = [structure.canonical_key(c) for c in got]
    self.assertEqual(keys, sorted(keys))
    for c in got:
      self.assertTrue(exact_linalg.is_ns(c))
      self.assertEqual(exact_linalg.determinant(c), 5)
      self.assertEqual(structure.weakly_terminal(c), c)


if __name__ == '__main__':
  absltest.main()
