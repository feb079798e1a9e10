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

"""Unit tests for `density.py`."""

import itertools
import math

from absl.testing import absltest
from absl.testing import parameterized
import mpmath
import numpy as np

from phlat._src import density
from phlat._src import errors
from phlat._src import exact_linalg
from phlat._src import settings
from phlat._src import structure

Fraction = density.Fraction
QPolynomial = density.QPolynomial

# Small cutoffs keep the exact per-prime loops fast.
_P_SMALL = 2_000


def _rank_mod_p(rows, p):
  rows = [[x % p for x in row] for row in rows]
  rank = 0
  cols = len(rows[0])
  for c in range(cols):
    pivot = next((r for r in range(rank, len(rows)) if rows[r][c]), None)
    if pivot is None:
      continue
    rows[rank], rows[pivot] = rows[pivot], rows[rank]
    inv = pow(rows[rank][c], -1, p)
    rows[rank] = [x * inv % p for x in rows[rank]]
    for r in range(len(rows)):
      if r != rank and rows[r][c]:
        f = rows[r][c]
        rows[r] = [(x - f * y) % p for x, y in zip(rows[r], rows[rank])]
    rank += 1
  return rank


class QPolynomialTest(parameterized.TestCase):

  def test_trailing_zeros_are_trimmed(self):
    self.assertEqual(QPolynomial([1, 0, -1, 0, 0]).coefficients,
                     (Fraction(1), Fraction(0), Fraction(-1)))
    self.assertEqual(QPolynomial([0, 0]).degree, -1)

  def test_arithmetic(self):
    a = QPolynomial([1, -1])
    b = QPolynomial([1, 1])
    self.assertEqual(a * b, QPolynomial([1, 0, -1]))
    self.assertEqual(a + b, QPolynomial([2]))
    self.assertEqual(a - b, QPolynomial([0, -2]))

  def test_evaluation_is_exact(self):
    poly = QPolynomial([1, Fraction(1, 2), 0, -3])
    self.assertEqual(poly(Fraction(1, 3)), 1 + Fraction(1, 6) - Fraction(1, 9))

  def test_first_correction(self):
    self.assertEqual(QPolynomial([1, 0, 0, 4, 5]).first_correction(),
                     (3, Fraction(4)))
    self.assertIsNone(QPolynomial([1]).first_correction())


class LandsbergTest(parameterized.TestCase):

  @parameterized.parameters(
      (2, 0, 2, 6),
      (2, 1, 2, 9),
      (2, 2, 2, 1),
      (3, 3, 5, 1),
      (3, 0, 2, 168),
  )
  def test_values(self, n, s, p, expected):
    self.assertEqual(density.landsberg_count(n, s, p), expected)

  @parameterized.parameters(itertools.product(range(1, 5), [2, 3, 5, 7]))
  def test_counts_cover_all_matrices(self, n, p):
    self.assertEqual(sum(density.landsberg_rank_counts(n, p)), p**(n * n))

  @parameterized.parameters((2, 3), (3, 2))
  def test_against_enumeration(self, n, p):
    counts = [0] * (n + 1)
    for entries in itertools.product(range(p), repeat=n * n):
      rows = [entries[i * n:(i + 1) * n] for i in range(n)]
      counts[n - _rank_mod_p(rows, p)] += 1
    self.assertEqual(tuple(counts), density.landsberg_rank_counts(n, p))

  def test_errors(self):
    with self.assertRaises(errors.RangeError):
      density.landsberg_count(3, 4, 2)
    with self.assertRaises(errors.RangeError):
      density.landsberg_count(3, 1, 4)


class MaclaurinTest(parameterized.TestCase):

  def test_first_truncation_is_exact(self):
    self.assertEqual(density.maclaurin_truncation(1),
                     QPolynomial([1, 0, 0, 0, 0, 0, -1]))

  @parameterized.parameters(1, 2, 3)
  def test_correction_degree(self, s):
    a = density.maclaurin_truncation(s)
    top = (s + 1)**2 + 2
    for k in range(1, top):
      self.assertEqual(a.coefficient(k), 0, msg=f'degree {k}')
    self.assertEqual(a.coefficient(0), 1)
    self.assertEqual(a.coefficient(top), -1)

  @parameterized.parameters(
      (s, n) for s in (1, 2, 3) for n in range((s + 1)**2 + 2, 21))
  def test_n_dependent_correction_degree(self, s, n):
    a = density.maclaurin_truncation_n(s, n)
    self.assertEqual(a.first_correction(), ((s + 1)**2 + 2, Fraction(-1)))

  @parameterized.parameters(
      (1, n, p) for n in range(3, 9) for p in (2, 3, 5))
  def test_matches_rank_fraction(self, s, n, p):
    a = density.maclaurin_truncation_n(s, n)
    rest = math.prod(1 - Fraction(1, p**i) for i in range((s + 1)**2, n + 1))
    self.assertEqual(a(Fraction(1, p)) * rest,
                     density.rank_at_least_fraction(n, s, p))

  @parameterized.parameters((2, 8, 2), (2, 9, 3), (2, 10, 5), (3, 15, 2))
  def test_matches_rank_fraction_deeper(self, s, n, p):
    a = density.maclaurin_truncation_n(s, n)
    rest = math.prod(1 - Fraction(1, p**i) for i in range((s + 1)**2, n + 1))
    self.assertEqual(a(Fraction(1, p)) * rest,
                     density.rank_at_least_fraction(n, s, p))

  def test_errors(self):
    with self.assertRaises(errors.RangeError):
      density.maclaurin_truncation(0)
    with self.assertRaises(errors.RangeError):
      density.maclaurin_truncation_n(2, 7)


class FConstantTest(parameterized.TestCase):

  def test_special_values(self):
    self.assertEqual(density.f_constant(1).value, 1)
    self.assertAlmostEqual(
        float(density.f_constant(2)), float(1 / mpmath.zeta(2)), delta=1e-6)
    self.assertAlmostEqual(float(density.f_constant(0)), 1.943596, delta=1e-5)
    self.assertAlmostEqual(float(density.f_constant(3)), 0.42825, places=4)

  def test_brackets_closed_forms(self):
    self.assertTrue(density.f_constant(2).brackets(1 / density.zeta(2)))
    self.assertTrue(density.f_constant(0).brackets(density.landau_totient()))

  @parameterized.parameters(0, 2, 3, 5)
  def test_tail_bound_is_honest(self, s):
    coarse = density.f_constant(s, 5_000)
    fine = density.f_constant(s, 10_000)
    self.assertLess(abs(fine.value - coarse.value), coarse.tail_bound)

  def test_decreasing_and_log_convex(self):
    values = [v.value for v in density.f_values(12, _P_SMALL)]
    for k in range(1, 12):
      self.assertLess(values[k + 1], values[k])
      self.assertLessEqual(values[k]**2, values[k - 1] * values[k + 1])

  def test_alternating_sum_decreases_to_zero(self):
    ds = [density.alternating_f_sum(N, _P_SMALL).value for N in range(1, 11)]
    for prev, cur in zip(ds, ds[1:]):
      self.assertGreaterEqual(cur, 0)
      self.assertLess(cur, prev)

  @parameterized.parameters(1, 2, 3)
  def test_telescoping_gap_shrinks(self, k):
    gaps = [density.telescoping_remainder(k, N, _P_SMALL) for N in range(9)]
    with mpmath.workdps(settings.MP_DPS):
      for N, gap in enumerate(gaps):
        self.assertLessEqual(gap, 0)
        difference = density.finite_difference(k - 1, N + 1, _P_SMALL).value
        self.assertLess(abs(gap - (-1)**N * difference), mpmath.mpf(10)**-45)
      for prev, cur in zip(gaps, gaps[1:]):
        self.assertLess(abs(cur), abs(prev))

  def test_telescoping_gap_tolerance(self):
    gaps = [abs(density.telescoping_remainder(1, N, _P_SMALL))
            for N in range(9)]
    self.assertGreater(gaps[0], 0.9)
    reached = [N for N, gap in enumerate(gaps) if gap < 0.34]
    self.assertEqual(reached, list(range(2, 9)))
    with mpmath.workdps(settings.MP_DPS):
      d = density.alternating_f_sum(9, _P_SMALL).value
      self.assertLess(abs(gaps[8] - d), mpmath.mpf(10)**-45)

  def test_errors(self):
    with self.assertRaises(errors.RangeError):
      density.f_constant(-1)
    with self.assertRaises(errors.RangeError):
      density.f_constant(2, 1)
    with self.assertRaises(errors.RangeError):
      density.alternating_f_sum(-1)
    with self.assertRaises(errors.RangeError):
      density.telescoping_remainder(0, 3)


class DensityFormulaTest(parameterized.TestCase):

  def test_zeta_products(self):
    self.assertAlmostEqual(float(density.zeta_product_limit()), 2.294857,
                           delta=1e-6)
    self.assertAlmostEqual(float(density.zeta_product(3)), 1.977304,
                           delta=1e-6)

  def test_ns_and_single_deletion(self):
    self.assertAlmostEqual(float(density.ns_density(3)), 0.5757, places=4)
    self.assertAlmostEqual(float(density.single_deletion_density(3)), 0.42073,
                           places=4)

  def test_deficiency_limits(self):
    self.assertAlmostEqual(float(density.deficiency_limit(1)), 0.84694,
                           delta=1e-3)
    self.assertGreater(float(density.deficiency_limit(2)), 0.99)
    self.assertGreater(float(density.deficiency_limit(3)), 0.9999)

  def test_deficiency_decreases_to_limit(self):
    limit = density.deficiency_limit(1, _P_SMALL)
    values = [density.deficiency_density(n, 1, _P_SMALL) for n in range(6, 10)]
    for prev, cur in zip(values, values[1:]):
      self.assertLess(cur.value, prev.value)
    self.assertGreater(values[-1].value + values[-1].tail_bound,
                       limit.value - limit.tail_bound)

  @parameterized.parameters(6, 8, 10)
  def test_simplified_first_deficiency(self, n):
    got = density.deficiency_density(n, 1, _P_SMALL, simplified=True)
    expected = density.landau_totient() / density.zeta_product(n)
    self.assertTrue(got.brackets(expected))

  def test_deficiency_errors(self):
    with self.assertRaises(errors.RangeError):
      density.deficiency_density(5, 1)
    with self.assertRaises(errors.RangeError):
      density.deficiency_density(20, 0)

  @parameterized.parameters((3, 0.555), (4, 0.666), (5, 0.733), (6, 0.775))
  def test_tf_density_values(self, n, expected):
    self.assertAlmostEqual(float(density.tf_density_formula(n, _P_SMALL)),
                           expected, delta=0.03)

  def test_tf_density_increases_below_limit(self):
    values = [float(density.tf_density_formula(n, _P_SMALL))
              for n in range(3, 9)]
    limit = float(density.tf_density_limit(_P_SMALL))
    self.assertEqual(values, sorted(values))
    self.assertLess(values[-1], limit)
    self.assertAlmostEqual(limit, 0.84694, delta=1e-3)

  @parameterized.parameters(3, 5, 7)
  def test_substituted_numerator(self, n):
    got = density.tf_density_formula(n, _P_SMALL, substituted=True)
    numerator = (density.f_constant(0, _P_SMALL).value -
                 density.alternating_f_sum(n, _P_SMALL).value)
    self.assertAlmostEqual(float(got.value * density.zeta_product(n)),
                           float(numerator), places=12)

  def test_constants_table(self):
    table = density.constants_table(_P_SMALL)
    self.assertIn('F(8)', table)
    self.assertEqual(table['F(3)'], table['carefree'])
    self.assertEqual(table['landau_totient'].tail_bound, 0)

  def test_tf_errors(self):
    with self.assertRaises(errors.RangeError):
      density.tf_density_formula(2)


class MonteCarloTest(parameterized.TestCase):

  @parameterized.parameters((3, 4, 150), (4, 3, 60))
  def test_classification_matches_library(self, n, bound, count):
    # Use `RandomState` to ensure deterministic sampling across Numpy versions.
    rng = np.random.RandomState(11)
    batch = rng.randint(-bound, bound + 1, size=(count, n, n), dtype=np.int64)
    ns, tf = density.classify_batch(batch)
    for b, in_ns, in_tf in zip(batch, ns, tf):
      m = exact_linalg.IntMatrix(b.tolist())
      self.assertEqual(bool(in_ns), exact_linalg.is_ns(m))
      if in_ns:
        self.assertEqual(bool(in_tf), structure.max_one_block(m) >= n - 1)

  def test_determinants_are_exact(self):
    rng = np.random.RandomState(3)
    batch = rng.randint(-50, 51, size=(40, 4, 4), dtype=np.int64)
    got = density.batch_determinant(batch)
    for b, d in zip(batch, got):
      self.assertEqual(int(d),
                       exact_linalg.determinant(
                           exact_linalg.IntMatrix(b.tolist())))

  def test_duplicate_columns_never_counted(self):
    rng = np.random.RandomState(5)
    batch = rng.randint(-1000, 1001, size=(500, 3, 3), dtype=np.int64)
    batch[:, :, 2] = batch[:, :, 0]
    ns, tf = density.classify_batch(batch)
    self.assertFalse(ns.any())
    self.assertFalse(tf.any())

  def test_matches_formula(self):
    result = density.monte_carlo_tf_density(3, 1000, 100_000, seed=42)
    expected = float(density.tf_density_formula(3))
    self.assertLess(abs(result.estimate - expected), 3 * result.stderr)
    ns_expected = float(density.ns_density(3))
    ns_stderr = math.sqrt(ns_expected * (1 - ns_expected) / result.samples)
    self.assertLess(abs(result.ns_estimate - ns_expected), 3 * ns_stderr)

  def test_threads_do_not_change_result(self):
    serial = density.monte_carlo_tf_density(3, 100, 5_000, seed=7,
                                            batch_size=1_000)
    threaded = density.monte_carlo_tf_density(3, 100, 5_000, seed=7,
                                              threads=3, batch_size=1_000)
    self.assertEqual(serial, threaded)

  def test_dual_is_rarer(self):
    single = density.monte_carlo_tf_density(3, 50, 2_000, seed=1)
    dual = density.monte_carlo_dual_tf_density(3, 50, 2_000, seed=1)
    self.assertLessEqual(dual.hits, single.hits)
    self.assertEqual(dual.ns_hits, single.ns_hits)
    self.assertGreater(dual.hits, 0)

  def test_limits(self):
    with self.assertRaises(errors.SizeLimitError):
      density.monte_carlo_tf_density(6, 10, 10)
    with self.assertRaises(errors.RangeError):
      density.monte_carlo_tf_density(5, 10**4, 10)
    with self.assertRaises(errors.RangeError):
      density.monte_carlo_tf_density(3, 0, 10)


if __name__ == '__main__':
  absltest.main()
