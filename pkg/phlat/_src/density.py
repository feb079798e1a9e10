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

"""Natural densities of integer matrices with a large 1-block.

The densities here are Euler products: a matrix property defined prime by
prime has density `∏_p (fraction of matrices mod p with the property)`.
Products are truncated at a prime cutoff `p_max` and carry a tail bound, so
`value ± tail_bound` brackets the infinite product. Per-prime factors are
exact rationals; the running product is kept at `settings.MP_DPS` digits.

Membership of `TF_n ∩ NS_n` has no description prime by prime, so the
inclusion-exclusion formula for its density is cross-checked by sampling.

"""
# pylint: disable=invalid-name

import collections
from concurrent import futures
import fractions
import functools
import itertools
import math
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from absl import logging
import attr
import mpmath
import numpy as np
from phlat._src import duality
from phlat._src import errors
from phlat._src import exact_linalg
from phlat._src import settings
from phlat._src import structure
import sympy
from sympy.combinatorics import permutations as sympy_permutations


Fraction = fractions.Fraction
Factor = Callable[[int], Fraction]

_Z = sympy.Symbol('z')


def _to_fraction(value) -> Fraction:
  if isinstance(value, sympy.Rational):
    return Fraction(int(value.p), int(value.q))
  return Fraction(value)


def _trim(coefficients: Sequence) -> Tuple[Fraction, ...]:
  values = [_to_fraction(c) for c in coefficients]
  while values and values[-1] == 0:
    values.pop()
  return tuple(values)


@attr.define(frozen=True)
class QPolynomial:
  """Polynomial in `z` with exact rational coefficients, lowest degree first."""

  coefficients: Tuple[Fraction, ...] = attr.field(converter=_trim)

  @classmethod
  def from_poly(cls, poly: sympy.Poly) -> 'QPolynomial':
    return cls(reversed(poly.all_coeffs()))

  def to_poly(self) -> sympy.Poly:
    terms = [sympy.Rational(c.numerator, c.denominator)
             for c in reversed(self.coefficients)] or [0]
    return sympy.Poly(terms, _Z, domain='QQ')

  @property
  def degree(self) -> int:
    return len(self.coefficients) - 1

  def coefficient(self, k: int) -> Fraction:
    if 0 <= k < len(self.coefficients):
      return self.coefficients[k]
    return Fraction(0)

  def first_correction(self) -> Optional[Tuple[int, Fraction]]:
    """Lowest `(degree, coefficient)` with degree >= 1 and nonzero value."""
    for k, c in enumerate(self.coefficients[1:], start=1):
      if c:
        return k, c
    return None

  def __call__(self, z) -> Fraction:
    z = Fraction(z)
    acc = Fraction(0)
    for c in reversed(self.coefficients):
      acc = acc * z + c
    return acc

  def __add__(self, other: 'QPolynomial') -> 'QPolynomial':
    return QPolynomial.from_poly(self.to_poly() + other.to_poly())

  def __sub__(self, other: 'QPolynomial') -> 'QPolynomial':
    return QPolynomial.from_poly(self.to_poly() - other.to_poly())

  def __mul__(self, other: 'QPolynomial') -> 'QPolynomial':
    return QPolynomial.from_poly(self.to_poly() * other.to_poly())

  def __str__(self) -> str:
    return str(self.to_poly().as_expr())


@attr.define(frozen=True)
class PrimeProduct:
  """A truncated Euler product, or an exact combination of such products.

  Attributes:
    value: the value with primes up to `p_max` included.
    tail_bound: `|true value - value|` is at most this.
    p_max: the prime cutoff, `None` when the value is exact.
    factor_at_prime: the exact per-prime factor, when there is one.
  """

  value: mpmath.mpf
  tail_bound: mpmath.mpf
  p_max: Optional[int] = None
  factor_at_prime: Optional[Factor] = attr.field(
      default=None, eq=False, repr=False)

  @property
  def interval(self) -> Tuple[mpmath.mpf, mpmath.mpf]:
    return self.value - self.tail_bound, self.value + self.tail_bound

  def brackets(self, x) -> bool:
    lo, hi = self.interval
    return lo <= x <= hi

  def __float__(self) -> float:
    return float(self.value)

  def to_json(self) -> dict:
    return {'value': mpmath.nstr(self.value, 20),
            'tail_bound': mpmath.nstr(self.tail_bound, 5),
            'p_max': self.p_max}


def _exact(value) -> PrimeProduct:
  return PrimeProduct(value, mpmath.mpf(0))


def _mp(x: Fraction) -> mpmath.mpf:
  return mpmath.mpf(x.numerator) / x.denominator


@functools.lru_cache(maxsize=8)
def primes_upto(p_max: int) -> Tuple[int, ...]:
  return tuple(int(p) for p in sympy.primerange(2, p_max + 1))


def euler_product(factor: Factor, c: Fraction, p_max: int) -> PrimeProduct:
  """`∏_p factor(p)` over primes up to `p_max`.

  Args:
    factor: exact per-prime factor.
    c: a constant with `|factor(p) - 1| <= c/p²` for every prime `p > p_max`.
    p_max: the prime cutoff.

  Returns:
    The truncated product. Its tail bound uses `Σ_{p > p_max} 1/p² <=
    1/(p_max - 1)` and `|log(1 + x)| <= 2|x|` for `|x| <= 1/2`.
  """
  c = Fraction(c)
  if p_max < 2:
    raise errors.RangeError(
        f'The prime cutoff must be at least 2; got {p_max}.')
  if 2 * c > (p_max + 1)**2:
    raise errors.RangeError(
        f'p_max = {p_max} is too small to bound the tail for c = {c}.')
  with mpmath.workdps(settings.MP_DPS):
    value = mpmath.mpf(1)
    for p in primes_upto(p_max):
      value *= _mp(factor(p))
    tail = abs(value) * mpmath.expm1(2 * _mp(c) / (p_max - 1))
  return PrimeProduct(value, tail, p_max, factor)


def _scale(product: PrimeProduct, by) -> PrimeProduct:
  with mpmath.workdps(settings.MP_DPS):
    return PrimeProduct(product.value * by, product.tail_bound * abs(by),
                        product.p_max)


# Rank counts over finite fields.


def _require_prime(p: int) -> None:
  if not sympy.isprime(p):
    raise errors.RangeError(f'{p} is not prime.')


def landsberg_count(n: int, s: int, p: int) -> int:
  """Number of n×n matrices over `Z_p` of rank `n - s`."""
  if not 0 <= s <= n:
    raise errors.RangeError(f'Need 0 <= s <= n; got s = {s}, n = {n}.')
  _require_prime(p)
  r = n - s
  numer = math.prod(p**n - p**i for i in range(r))**2
  denom = math.prod(p**r - p**i for i in range(r))
  count, rem = divmod(numer, denom)
  assert rem == 0, (n, s, p)
  return count


def landsberg_rank_counts(n: int, p: int) -> Tuple[int, ...]:
  """Counts indexed by the rank deficiency `s = 0..n`."""
  return tuple(landsberg_count(n, s, p) for s in range(n + 1))


def rank_at_least_fraction(n: int, s: int, p: int) -> Fraction:
  """Fraction of n×n matrices over `Z_p` of rank at least `n - s`."""
  return Fraction(sum(landsberg_count(n, j, p) for j in range(s + 1)),
                  p**(n * n))


# Truncated Euler products as polynomials.


def _euler_poly(lo: int, hi: int) -> sympy.Poly:
  poly = sympy.Poly(1, _Z, domain='QQ')
  for i in range(lo, hi + 1):
    poly *= sympy.Poly(1 - _Z**i, _Z, domain='QQ')
  return poly


def _truncation_poly(s: int, n: Optional[int]) -> sympy.Poly:
  head = _euler_poly(1, (s + 1)**2 - 1)
  total = head
  for j in range(1, s + 1):
    numer = sympy.Poly(_Z**(j * j), _Z, domain='QQ')
    if n is not None:
      numer *= _euler_poly(n - j + 1, n)
    total += (head * numer).exquo(_euler_poly(1, j)**2)
  return total


@functools.lru_cache(maxsize=None)
def maclaurin_truncation(s: int) -> QPolynomial:
  """The polynomial truncation `a_s` of the Maclaurin series.

  `a_s = ∏_{i<(s+1)²}(1 - z^i)·(1 + Σ_{j<=s} z^{j²}/∏_{k<=j}(1 - z^k)²)`.

  The denominators divide the product, so `a_s` is a polynomial. Its
  expansion is `1 - z^{(s+1)²+2} + ...`.

  Args:
    s: the rank deficiency, at least 1.

  Returns:
    `a_s` with exact coefficients.
  """
  if s < 1:
    raise errors.RangeError(f'The truncation needs s >= 1; got {s}.')
  return QPolynomial.from_poly(_truncation_poly(s, None))


@functools.lru_cache(maxsize=None)
def maclaurin_truncation_n(s: int, n: int) -> QPolynomial:
  """The n-dependent `a_s`, with `∏_{i=n-j+1}^{n}(1 - z^i)` in each summand.

  For this variant
  `m(z)·Σ_{j<=s} c_j(z) = a_s(z)·∏_{i=(s+1)²}^{n}(1 - z^i)`
  exactly, where the left side is the rank-at-least-`n - s` fraction at
  `z = 1/p`.
  """
  if s < 1:
    raise errors.RangeError(f'The truncation needs s >= 1; got {s}.')
  if n < (s + 1)**2 - 1:
    raise errors.RangeError(
        f'The n-dependent truncation needs n >= {(s + 1)**2 - 1}; got {n}.')
  return QPolynomial.from_poly(_truncation_poly(s, n))


# Zeta values.


def zeta(k: int) -> mpmath.mpf:
  with mpmath.workdps(settings.MP_DPS):
    return +mpmath.zeta(k)


def zeta_product(n: int) -> mpmath.mpf:
  """`∏_{k=2}^{n} ζ(k)`."""
  with mpmath.workdps(settings.MP_DPS):
    return mpmath.fprod(mpmath.zeta(k) for k in range(2, n + 1))


@functools.lru_cache(maxsize=None)
def zeta_tail_product(start: int = 2) -> mpmath.mpf:
  """`∏_{k>=start} ζ(k)`, stopping once `ζ(k) - 1` is negligible."""
  if start < 2:
    raise errors.RangeError(
        f'ζ has a pole at 1; the product needs start >= 2, got {start}.')
  with mpmath.workdps(settings.MP_DPS):
    eps = mpmath.mpf(10)**(-settings.MP_DPS - 5)
    total = mpmath.mpf(1)
    for k in itertools.count(start):
      z = mpmath.zeta(k)
      total *= z
      if z - 1 < eps:
        return total


def zeta_product_limit() -> mpmath.mpf:
  return zeta_tail_product(2)


def landau_totient() -> mpmath.mpf:
  """`ζ(2)ζ(3)/ζ(6)`, the value of `F(0)`."""
  with mpmath.workdps(settings.MP_DPS):
    return mpmath.zeta(2) * mpmath.zeta(3) / mpmath.zeta(6)


def ns_density(n: int) -> mpmath.mpf:
  """Density of `NS_n`: every column is nonzero mod every prime."""
  if n < 2:
    raise errors.RangeError(f'NS density needs n >= 2; got {n}.')
  with mpmath.workdps(settings.MP_DPS):
    return 1 / mpmath.zeta(n)**n


def single_deletion_density(n: int) -> mpmath.mpf:
  """Density of `NS_n` matrices whose last column can be deleted spanning.

  These are the matrices with Hermite form `[[I, a], [0, d]]`.
  """
  if n < 2:
    raise errors.RangeError(f'Deletion density needs n >= 2; got {n}.')
  with mpmath.workdps(settings.MP_DPS):
    return 1 / (zeta_product(n - 1) * mpmath.zeta(n)**2)


# Deficiency densities.


def _polynomial_factor(a: QPolynomial, p_max: int) -> Tuple[Factor, Fraction]:
  """Per-prime factor `a(1/p)` and its tail constant."""
  correction = a.first_correction()
  if correction is None:
    c = Fraction(0)
  else:
    k0, _ = correction
    c = Fraction(sum(abs(x) for x in a.coefficients[1:]), p_max**(k0 - 2))
  return (lambda p: a(Fraction(1, p))), c


def deficiency_density(
    n: int,
    s: int,
    p_max: int = settings.DEFAULT_P_MAX,
    simplified: bool = False,
) -> PrimeProduct:
  """Density of n×n matrices of rank at least `n - s` modulo every prime.

  The per-prime fraction is `a_s(1/p)·∏_{i=(s+1)²}^{n}(1 - p^-i)`, so the
  density is `∏_p a_s(1/p) / ∏_{i=(s+1)²}^{n} ζ(i)`.

  Args:
    n: matrix size, greater than `(s + 1)² + 1`.
    s: the allowed rank deficiency, at least 1.
    p_max: the prime cutoff.
    simplified: use the n-independent `a_s`. The default n-dependent
      polynomial gives the exact density.

  Returns:
    The density with its tail bound.
  """
  if s < 1:
    raise errors.RangeError(f'Deficiency density needs s >= 1; got {s}.')
  if n <= (s + 1)**2 + 1:
    raise errors.RangeError(
        f'Deficiency density at s = {s} needs n > {(s + 1)**2 + 1}; got {n}.')
  a = maclaurin_truncation(s) if simplified else maclaurin_truncation_n(s, n)
  factor, c = _polynomial_factor(a, p_max)
  psi = euler_product(factor, c, p_max)
  with mpmath.workdps(settings.MP_DPS):
    zetas = mpmath.fprod(mpmath.zeta(i) for i in range((s + 1)**2, n + 1))
  lo = (s + 1)**2

  def full_factor(p: int) -> Fraction:
    return factor(p) * math.prod(
        1 - Fraction(1, p**i) for i in range(lo, n + 1))

  scaled = _scale(psi, 1 / zetas)
  return attr.evolve(scaled, factor_at_prime=full_factor)


def deficiency_limit(s: int,
                     p_max: int = settings.DEFAULT_P_MAX) -> PrimeProduct:
  """The `n → ∞` limit `∏_p a_s(1/p) / ∏_{j>=(s+1)²} ζ(j)`."""
  factor, c = _polynomial_factor(maclaurin_truncation(s), p_max)
  psi = euler_product(factor, c, p_max)
  return _scale(psi, 1 / zeta_tail_product((s + 1)**2))


# The F function and the density of TF_n ∩ NS_n.


def _f_factor(s: int) -> Factor:

  def factor(p: int) -> Fraction:
    z = Fraction(1, p)
    return (1 - z) + z * (1 - z)**(s - 1)

  return factor


@functools.lru_cache(maxsize=None)
def f_constant(s: int, p_max: int = settings.DEFAULT_P_MAX) -> PrimeProduct:
  """`F(s) = ∏_p (1 - (p^{s-1} - (p-1)^{s-1})/p^s)`.

  `F(0)` is the Landau totient constant, `F(1) = 1`, `F(2) = 1/ζ(2)` and
  `F(3)` is the carefree constant.
  """
  if s < 0:
    raise errors.RangeError(f'F is tabulated for s >= 0; got {s}.')
  # |f_s(1/p) - 1| <= max(s - 1, 2)/p².
  return euler_product(_f_factor(s), Fraction(max(s - 1, 2)), p_max)


def f_values(upto: int, p_max: int = settings.DEFAULT_P_MAX
             ) -> List[PrimeProduct]:
  return [f_constant(s, p_max) for s in range(upto + 1)]


def _combine(weights: Sequence[int], values: Sequence[PrimeProduct]
             ) -> PrimeProduct:
  with mpmath.workdps(settings.MP_DPS):
    value = mpmath.fsum(w * v.value for w, v in zip(weights, values))
    tail = mpmath.fsum(abs(w) * v.tail_bound for w, v in zip(weights, values))
  return PrimeProduct(value, tail, values[0].p_max if values else None)


def finite_difference(k: int, order: int, p_max: int = settings.DEFAULT_P_MAX
                      ) -> PrimeProduct:
  """`Δ^order F(k)` with `Δf(k) = f(k+1) - f(k)`."""
  weights = [(-1)**(order - i) * math.comb(order, i) for i in range(order + 1)]
  return _combine(weights,
                  [f_constant(k + i, p_max) for i in range(order + 1)])


def alternating_f_sum(N: int, p_max: int = settings.DEFAULT_P_MAX
                      ) -> PrimeProduct:
  """`D(N) = Σ_{i=0}^{N} (-1)^i C(N, i) F(i)`, which decreases to 0."""
  if N < 0:
    raise errors.RangeError(f'D(N) needs N >= 0; got {N}.')
  weights = [(-1)**i * math.comb(N, i) for i in range(N + 1)]
  return _combine(weights, f_values(N, p_max))


def telescoping_remainder(k: int, N: int,
                          p_max: int = settings.DEFAULT_P_MAX) -> mpmath.mpf:
  """`Σ_{j=0}^{N} (-1)^j Δ^j F(k) - F(k-1)`, the gap of the N-th partial sum.

  The gap equals `(-1)^N Δ^{N+1} F(k-1)`. Every Euler factor of `F` is a
  moment sequence in `s`, so the gap is never positive and its magnitude
  decreases with `N`; for `k = 1` it is `-D(N+1)`.
  """
  if k < 1 or N < 0:
    raise errors.RangeError(f'Need k >= 1 and N >= 0; got k = {k}, N = {N}.')
  with mpmath.workdps(settings.MP_DPS):
    partial = mpmath.fsum((-1)**j * finite_difference(k, j, p_max).value
                          for j in range(N + 1))
    return partial - f_constant(k - 1, p_max).value


def tf_density_formula(
    n: int,
    p_max: int = settings.DEFAULT_P_MAX,
    substituted: bool = False,
) -> PrimeProduct:
  """Density of `NS_n` matrices PH-equivalent to a 1-block size `n - 1` form.

  By inclusion-exclusion over the sets of deletable columns the numerator is
  `n/ζ(n) - C(n,2)/ζ(2) + Σ_{j=3}^{n} (-1)^{j-1} C(n,j) F(j)`, and the
  denominator is `∏_{k=2}^{n} ζ(k)`.

  Args:
    n: matrix size, at least 3.
    p_max: the prime cutoff for the `F(j)`.
    substituted: replace `1/ζ(n)` by `F(1)` and `1/ζ(2)` by `F(2)`, making the
      numerator `F(0) - D(n)`.

  Returns:
    The density with its tail bound.
  """
  if n < 3:
    raise errors.RangeError(f'The TF density formula needs n >= 3; got {n}.')
  weights = [(-1)**(j - 1) * math.comb(n, j) for j in range(n + 1)]
  fs = f_values(n, p_max)
  with mpmath.workdps(settings.MP_DPS):
    if substituted:
      numerator = _combine(weights[1:], fs[1:])
    else:
      head = n / mpmath.zeta(n) - math.comb(n, 2) / mpmath.zeta(2)
      tail = _combine(weights[3:], fs[3:])
      numerator = PrimeProduct(head + tail.value, tail.tail_bound, p_max)
    return _scale(numerator, 1 / zeta_product(n))


def tf_density_limit(p_max: int = settings.DEFAULT_P_MAX) -> PrimeProduct:
  """`F(0)/∏_{k>=2} ζ(k)`, the increasing limit of the TF density."""
  return _scale(f_constant(0, p_max), 1 / zeta_product_limit())


def constants_table(p_max: int = settings.DEFAULT_P_MAX
                    ) -> Dict[str, PrimeProduct]:
  table = collections.OrderedDict()
  for s, value in enumerate(f_values(8, p_max)):
    table[f'F({s})'] = value
  table['landau_totient'] = _exact(landau_totient())
  table['carefree'] = f_constant(3, p_max)
  table['zeta_product_limit'] = _exact(zeta_product_limit())
  table['tf_density_limit'] = tf_density_limit(p_max)
  return table


# Monte-Carlo sampling.


MonteCarloResult = collections.namedtuple(
    'MonteCarloResult',
    ['estimate', 'stderr', 'hits', 'ns_estimate', 'ns_hits', 'samples',
     'seed'])


@functools.lru_cache(maxsize=None)
def _signed_permutations(m: int) -> Tuple[Tuple[int, Tuple[int, ...]], ...]:
  return tuple((sympy_permutations.Permutation(list(perm)).signature(), perm)
               for perm in itertools.permutations(range(m)))


def batch_determinant(a: np.ndarray) -> np.ndarray:
  """Exact int64 determinants of a `(batch, m, m)` stack, by Leibniz."""
  batch, m = a.shape[0], a.shape[-1]
  total = np.zeros(batch, dtype=np.int64)
  for sign, perm in _signed_permutations(m):
    term = np.ones(batch, dtype=np.int64)
    for i, j in enumerate(perm):
      term = term * a[:, i, j]
    total += sign * term
  return total


def batch_minors(b: np.ndarray) -> np.ndarray:
  """`minors[:, i, j]` is the determinant with row i and column j deleted."""
  n = b.shape[-1]
  minors = np.empty(b.shape, dtype=np.int64)
  for i in range(n):
    rest = np.delete(b, i, axis=1)
    for j in range(n):
      minors[:, i, j] = batch_determinant(np.delete(rest, j, axis=2))
  return minors


def classify_batch(b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
  """Masks `(in NS_n, in TF_n ∩ NS_n)` for a `(batch, n, n)` int64 stack.

  A matrix is in `TF_n ∩ NS_n` iff it is NS and deleting some column leaves
  `n - 1` columns whose maximal minors are coprime.
  """
  n = b.shape[-1]
  minors = batch_minors(b)
  signs = np.array([(-1)**j for j in range(n)], dtype=np.int64)
  det = np.sum(signs * b[:, 0, :] * minors[:, 0, :], axis=1)
  columns_primitive = np.all(np.gcd.reduce(b, axis=1) == 1, axis=1)
  ns = (det != 0) & columns_primitive
  deletable = np.gcd.reduce(minors, axis=1) == 1
  return ns, ns & np.any(deletable, axis=1)


def _check_sampling(n: int, bound: int, samples: int, max_n: int) -> None:
  structure.check_size(n, max_n, 'Monte-Carlo sampling')
  if n < 2 or bound < 1 or samples < 1:
    raise errors.RangeError(
        f'Sampling needs n >= 2, bound >= 1 and samples >= 1; got n = {n}, '
        f'bound = {bound}, samples = {samples}.')
  if math.factorial(n) * bound**n >= 2**63:
    raise errors.RangeError(
        f'Entries bounded by {bound} overflow int64 determinants at n = {n}.')


def sample_batches(n: int, bound: int, samples: int, seed: int,
                   batch_size: int) -> List[np.ndarray]:
  """Uniform matrices with entries in `[-bound, bound]`, drawn in order."""
  # Use `RandomState` to ensure deterministic sampling across Numpy versions.
  rng = np.random.RandomState(seed)
  batches = []
  remaining = samples
  while remaining > 0:
    size = min(batch_size, remaining)
    batches.append(rng.randint(-bound, bound + 1, size=(size, n, n),
                               dtype=np.int64))
    remaining -= size
  return batches


def _count_batch(b: np.ndarray) -> Tuple[int, int]:
  ns, tf = classify_batch(b)
  return int(np.count_nonzero(ns)), int(np.count_nonzero(tf))


def _result(hits: int, ns_hits: int, samples: int, seed: int
            ) -> MonteCarloResult:
  estimate = hits / samples
  stderr = math.sqrt(estimate * (1 - estimate) / samples)
  return MonteCarloResult(estimate, stderr, hits, ns_hits / samples, ns_hits,
                          samples, seed)


def monte_carlo_tf_density(
    n: int,
    bound: int,
    samples: int,
    seed: int = 0,
    threads: int = 1,
    batch_size: int = 10_000,
    max_n: int = settings.LIMITS['mc_max_n'],
) -> MonteCarloResult:
  """Empirical frequency of `TF_n ∩ NS_n` among matrices in `[-bound, bound]`.

  All batches are drawn from one seeded generator before they are
  classified, so the result does not depend on `threads`.

  Args:
    n: matrix size.
    bound: entries are uniform in `[-bound, bound]`.
    samples: number of matrices.
    seed: generator seed.
    threads: worker threads classifying batches.
    batch_size: matrices per batch.
    max_n: size limit.

  Returns:
    The estimate with its binomial standard error, together with the NS
    frequency.
  """
  _check_sampling(n, bound, samples, max_n)
  batches = sample_batches(n, bound, samples, seed, batch_size)
  if threads > 1:
    with futures.ThreadPoolExecutor(max_workers=threads) as pool:
      counts = list(pool.map(_count_batch, batches))
  else:
    counts = [_count_batch(b) for b in batches]
  ns_hits = sum(c[0] for c in counts)
  hits = sum(c[1] for c in counts)
  result = _result(hits, ns_hits, samples, seed)
  logging.info('Sampled %d matrices (n = %d, bound = %d, seed = %d): '
               'TF density %.6f ± %.6f, NS density %.6f.', samples, n, bound,
               seed, result.estimate, result.stderr, result.ns_estimate)
  return result


def monte_carlo_dual_tf_density(
    n: int,
    bound: int,
    samples: int,
    seed: int = 0,
    batch_size: int = 10_000,
    max_n: int = 4,
) -> MonteCarloResult:
  """Empirical frequency of `B` and `B^op` both having a 1-block of `n - 1`.

  Only the TF members are passed to the exact `B^op` computation.
  """
  _check_sampling(n, bound, samples, max_n)
  hits = ns_hits = 0
  for batch in sample_batches(n, bound, samples, seed, batch_size):
    ns, tf = classify_batch(batch)
    ns_hits += int(np.count_nonzero(ns))
    for b in batch[tf]:
      bop = duality.opposite(exact_linalg.IntMatrix(b.tolist())).bop
      if structure.max_one_block(bop) >= n - 1:
        hits += 1
  result = _result(hits, ns_hits, samples, seed)
  logging.info('Sampled %d matrices (n = %d, bound = %d, seed = %d): '
               'dual TF density %.6f ± %.6f.', samples, n, bound, seed,
               result.estimate, result.stderr)
  return result
