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

"""The `phlat` command line.

Usage: `phlat <command> [matrix ...] [--flag ...]`, for example

  phlat equiv "1 1 2; 0 2 0; 0 0 3" "1 0 2; 0 1 3; 0 0 6" --certificate
  phlat count --n 3 --d 49 --method both
  phlat orbitlab --n 5 --k 2 --p 7 --top_only --json

Matrices use the text grammar `row (';' row)*` with whitespace-separated
integers, or the JSON object `{"rows": r, "cols": c, "data": [...]}`. A matrix
that starts with a minus sign goes after `--`.

Exit codes: 0 on success, 1 for usage errors, 2 when a computation limit is
hit and 3 for invalid input.
"""

import collections
import itertools
import json
import sys
import types
from typing import List, Optional, Sequence, TextIO

from absl import app
from absl import flags
from absl import logging
import mpmath

from phlat._src import counting
from phlat._src import density
from phlat._src import duality
from phlat._src import equivalence
from phlat._src import errors
from phlat._src import exact_linalg
from phlat._src import invariants
from phlat._src import orbitlab
from phlat._src import settings
from phlat._src import structure


flags.DEFINE_integer('n', 3, 'Matrix size.')
flags.DEFINE_integer('d', None, 'Determinant, for `enumerate` and `count`.')
flags.DEFINE_boolean('json', False, 'Print JSON instead of text.')
flags.DEFINE_integer('threads', 1,
                     'Worker threads for Monte-Carlo classification. The '
                     'output does not depend on this.')

flags.DEFINE_enum('method', 'formula', ['formula', 'census', 'both'],
                  'How `count` obtains the number of PH classes.')
flags.DEFINE_boolean('classes', False,
                     'Make `enumerate` print one line per PH class instead of '
                     'every weakly terminal matrix.')
flags.DEFINE_boolean('cache', True,
                     'Read and write census results under the cache root '
                     f'(`${settings.CACHE_ENV_VAR}`).')

flags.DEFINE_boolean('all_subsets', False,
                     'Make `invariants` print `J(B_Ω)` for every subset.')
flags.DEFINE_boolean('certificate', False,
                     'Make `equiv` print `(U, P)` or the invariant that '
                     'separates the matrices.')

flags.DEFINE_integer('pmax', settings.DEFAULT_P_MAX,
                     'Prime cutoff for Euler products.')
flags.DEFINE_integer('bound', 1000,
                     'Monte-Carlo entries lie in [-bound, bound].')
flags.DEFINE_integer('samples', 100_000, 'Monte-Carlo sample count.')
flags.DEFINE_integer('seed', 42, 'Monte-Carlo seed.')
flags.DEFINE_boolean('dual', False,
                     'Make `mc` also require a 1-block of size n-1 in B^op.')

flags.DEFINE_integer('k', 2, 'Columns of orbit lab matrices.')
flags.DEFINE_integer('p', 5, 'Orbit lab modulus.')
flags.DEFINE_boolean('top_only', False,
                     'Make `orbitlab` census only the top stratum.')

FLAGS = flags.FLAGS


Report = collections.namedtuple('Report', ['payload', 'lines'])
Command = collections.namedtuple('Command', ['arity', 'handler', 'help'])


def _group(g: exact_linalg.AbelianGroup) -> List[int]:
  return list(g.factors)


def _number(x) -> str:
  return mpmath.nstr(x, 15)


def _product(x: density.PrimeProduct) -> str:
  if not x.tail_bound:
    return _number(x.value)
  return f'{_number(x.value)} ± {mpmath.nstr(x.tail_bound, 3)}'


def _matrix(text: str) -> exact_linalg.IntMatrix:
  return exact_linalg.parse_matrix(text)


def _require_d() -> int:
  if FLAGS.d is None:
    raise app.UsageError('This command needs --d.')
  return FLAGS.d


def _reduce(args: Sequence[str]) -> Report:
  b = _matrix(args[0])
  c = structure.weakly_terminal(b)
  terminal = structure.is_terminal(c)
  sizes = sorted(structure.class_one_block_sizes(b))
  payload = {
      'weakly_terminal': exact_linalg.matrix_to_json(c),
      'terminal': terminal,
      'one_block_size': structure.one_block_size(c) if terminal else None,
      'max_one_block': structure.max_one_block(b),
      'class_one_block_sizes': sizes,
  }
  lines = [
      exact_linalg.format_matrix(c),
      f'terminal: {terminal}',
      f'max 1-block: {payload["max_one_block"]}',
      f'1-block sizes in class: {sizes}',
  ]
  return Report(payload, lines)


def _invariants(args: Sequence[str]) -> Report:
  b = _matrix(args[0])
  j = duality.j_group(b)
  j_tuple = invariants.j_tuple(b)
  lattice = invariants.invariant_lattice(b)
  payload = {
      'j': _group(j),
      'j_tuple': [_group(g) for g in j_tuple],
      'kernel_orders': list(lattice.kernel_orders),
  }
  lines = [
      f'J(B) = {j}',
      'J(B_Ω(i)) = ' + ', '.join(str(g) for g in j_tuple),
      f'kernel orders: {list(lattice.kernel_orders)}',
  ]
  if FLAGS.all_subsets:
    payload['lattice'] = lattice.to_json()
    lines.extend(f'J(B_{s.label()}) = {g}' for s, g in lattice.groups.items())
  return Report(payload, lines)


def _op(args: Sequence[str]) -> Report:
  b = _matrix(args[0])
  dual = duality.opposite(b)
  j, j_op = duality.j_group(b), duality.j_group(dual.bop)
  sequence, sup = duality.sequence_splits(b), duality.super_splits(b)
  payload = {
      'bop': exact_linalg.matrix_to_json(dual.bop),
      'delta': list(dual.m),
      'j': _group(j),
      'j_op': _group(j_op),
      'sequence_splits': sequence,
      'super_splits': sup,
  }
  lines = [
      f'B^op = {exact_linalg.format_matrix(dual.bop)}',
      f'Δ = diag{dual.m}',
      f'J(B) = {j}',
      f'J(B^op) = {j_op}',
      f'sequence splits: {sequence}',
      f'super splits: {sup}',
  ]
  return Report(payload, lines)


def _separating_invariant(b, c) -> str:
  if abs(exact_linalg.determinant(b)) != abs(exact_linalg.determinant(c)):
    return 'determinant'
  if duality.j_group(b) != duality.j_group(c):
    return 'j'
  if sorted(map(str, invariants.j_tuple(b))) != sorted(
      map(str, invariants.j_tuple(c))):
    return 'j_tuple'
  return 'hermite_orbit'


def _equiv(args: Sequence[str]) -> Report:
  b, c = _matrix(args[0]), _matrix(args[1])
  cert = equivalence.ph_equivalent(b, c)
  payload = {'equivalent': cert is not None}
  lines = ['EQUIVALENT' if cert else 'NOT EQUIVALENT']
  if FLAGS.certificate and cert:
    p = exact_linalg.IntMatrix.permutation(cert.perm)
    payload['u'] = exact_linalg.matrix_to_json(cert.u)
    payload['p'] = exact_linalg.matrix_to_json(p)
    lines.append(f'U = {exact_linalg.format_matrix(cert.u)}')
    lines.append(f'P = {exact_linalg.format_matrix(p)}')
  elif FLAGS.certificate:
    payload['separated_by'] = _separating_invariant(b, c)
    lines.append(f'separated by: {payload["separated_by"]}')
  return Report(payload, lines)


def _orbit(args: Sequence[str]) -> Report:
  """Lists the distinct `HNF(B·P)` over all permutations."""
  b = _matrix(args[0])
  structure.require_ns(b)
  structure.check_size(b.rows, settings.LIMITS['max_ph_n'], 'Class listing')
  members = {structure.act(b, perm)
             for perm in itertools.permutations(range(b.rows))}
  members = sorted(members, key=structure.canonical_key)
  rows = []
  for c in members:
    terminal = structure.is_terminal(c)
    rows.append({
        'matrix': exact_linalg.matrix_to_json(c),
        'terminal': terminal,
        'one_block_size': structure.one_block_size(c) if terminal else None,
    })
  lines = [
      f'{exact_linalg.format_matrix(c)}\t{"T" if r["terminal"] else "-"}'
      for c, r in zip(members, rows)
  ]
  return Report({'size': len(rows), 'members': rows}, lines)


def _enumerate(args: Sequence[str]) -> Report:
  del args
  n, d = FLAGS.n, _require_d()
  if FLAGS.classes:
    census = counting.ph_count_bruteforce(n, d, use_cache=FLAGS.cache)
    payload = {
        'n': n,
        'd': d,
        'classes': [{
            'representative': exact_linalg.matrix_to_json(o.representative),
            'size': o.size,
            'max_one_block': o.summary['max_one_block'],
        } for o in census.orbits],
    }
    return Report(payload, counting.census_lines(census))
  if n < 1 or d < 1:
    raise errors.RangeError(f'Need n, d >= 1; got n = {n}, d = {d}.')
  structure.check_size(n, settings.LIMITS['max_census_n'], 'Enumeration')
  matrices = structure.enumerate_weakly_terminal(n, d)
  if FLAGS.json:
    payload = {'n': n, 'd': d,
               'matrices': [exact_linalg.matrix_to_json(c) for c in matrices]}
    return Report(payload, ())
  return Report(None, (exact_linalg.format_matrix(c) for c in matrices))


def _count(args: Sequence[str]) -> Report:
  del args
  n, d = FLAGS.n, _require_d()
  payload = {'n': n, 'd': d}
  if FLAGS.method in ('formula', 'both'):
    if n != 3:
      raise errors.NotApplicableError(
          f'Closed-form class counts exist for n = 3 only; got n = {n}.')
    payload['formula'] = counting.ph_count_3(d)
  if FLAGS.method in ('census', 'both'):
    census = counting.ph_count_bruteforce(n, d, use_cache=FLAGS.cache)
    payload['census'] = census.classes
  values = [payload[k] for k in ('formula', 'census') if k in payload]
  if len(values) == 2 and values[0] != values[1]:
    logging.warning('Formula and census disagree at n = %d, d = %d: %d vs %d.',
                    n, d, *values)
  return Report(payload, [' / '.join(str(v) for v in values)])


def _density(args: Sequence[str]) -> Report:
  del args
  n, p_max = FLAGS.n, FLAGS.pmax
  formula = density.tf_density_formula(n, p_max)
  limit = density.tf_density_limit(p_max)
  ns = density.ns_density(n)
  single = density.single_deletion_density(n)
  payload = {
      'n': n,
      'tf_density': formula.to_json(),
      'tf_density_limit': limit.to_json(),
      'ns_density': _number(ns),
      'single_deletion_density': _number(single),
  }
  lines = [
      f'TF density (n = {n}): {_product(formula)}',
      f'TF density limit: {_product(limit)}',
      f'NS density: {_number(ns)}',
      f'single deletion density: {_number(single)}',
  ]
  return Report(payload, lines)


def _constants(args: Sequence[str]) -> Report:
  del args
  table = density.constants_table(FLAGS.pmax)
  payload = {'p_max': FLAGS.pmax,
             'constants': {k: v.to_json() for k, v in table.items()}}
  return Report(payload, [f'{k}\t{_product(v)}' for k, v in table.items()])


def _mc(args: Sequence[str]) -> Report:
  del args
  if FLAGS.dual:
    result = density.monte_carlo_dual_tf_density(
        FLAGS.n, FLAGS.bound, FLAGS.samples, seed=FLAGS.seed)
  else:
    result = density.monte_carlo_tf_density(
        FLAGS.n, FLAGS.bound, FLAGS.samples, seed=FLAGS.seed,
        threads=FLAGS.threads)
  payload = dict(result._asdict(), n=FLAGS.n, bound=FLAGS.bound,
                 dual=FLAGS.dual)
  lines = [
      f'# seed = {result.seed}, samples = {result.samples}, n = {FLAGS.n}, '
      f'bound = {FLAGS.bound}',
      f'estimate: {result.estimate:.6f} ± {result.stderr:.6f} '
      f'({result.hits} hits)',
      f'NS frequency: {result.ns_estimate:.6f}',
  ]
  return Report(payload, lines)


def _orbitlab(args: Sequence[str]) -> Report:
  if args:
    if len(args) != 2:
      raise app.UsageError('`orbitlab` takes no matrices or exactly two X.')
    x, x_prime = (_matrix(a).tolist() for a in args)
    report = orbitlab.duality_experiment(x, x_prime, FLAGS.p)
    payload = report.to_json()
    lines = [f'{k}: {v}' for k, v in payload.items()
             if k not in ('b', 'b_prime')]
    return Report(payload, lines)
  if FLAGS.top_only:
    census = orbitlab.max_stratum_census(FLAGS.n, FLAGS.k, FLAGS.p)
  else:
    census = orbitlab.orbit_census(FLAGS.n, FLAGS.k, FLAGS.p)
  lines = [
      f'F_{i}: {len(records)} orbits, {sum(r.matrices for r in records)} '
      'matrices' for i, records in census.strata().items()
  ]
  return Report(census.to_json(), lines)


COMMANDS = types.MappingProxyType({
    'reduce': Command(1, _reduce, 'Weakly terminal form and 1-block data.'),
    'invariants': Command(1, _invariants, 'J(B), J(B_Ω(i)) and kernels.'),
    'op': Command(1, _op, 'The opposite matrix and splitting flags.'),
    'equiv': Command(2, _equiv, 'Decides PH-equivalence of two matrices.'),
    'orbit': Command(1, _orbit, 'Lists the PH class of a matrix.'),
    'enumerate': Command(0, _enumerate, 'Weakly terminal matrices of det d.'),
    'count': Command(0, _count, 'Number of PH classes of det d.'),
    'density': Command(0, _density, 'TF density of size n.'),
    'constants': Command(0, _constants, 'Euler product constants.'),
    'mc': Command(0, _mc, 'Monte-Carlo TF density.'),
    'orbitlab': Command(None, _orbitlab, 'Orbits of F(n, k) over Z_p.'),
})


def _usage() -> str:
  width = max(len(name) for name in COMMANDS)
  return 'Commands:\n' + '\n'.join(
      f'  {name:<{width}}  {command.help}'
      for name, command in COMMANDS.items())


def _emit(name: str, report: Report, out: TextIO) -> None:
  if FLAGS.json:
    out.write(json.dumps(dict(report.payload, command=name), sort_keys=True,
                         ensure_ascii=False) + '\n')
    return
  for line in report.lines:
    out.write(line + '\n')


def dispatch(argv: Sequence[str], out: Optional[TextIO] = None,
             err: Optional[TextIO] = None) -> int:
  """Runs `argv[1]` on `argv[2:]` and returns the exit code."""
  out = out or sys.stdout
  err = err or sys.stderr
  if len(argv) < 2 or argv[1] not in COMMANDS:
    err.write(f'phlat: expected a command.\n{_usage()}\n')
    return settings.ExitCode.USAGE
  name, args = argv[1], list(argv[2:])
  command = COMMANDS[name]
  try:
    if command.arity is not None and len(args) != command.arity:
      raise app.UsageError(
          f'`{name}` takes {command.arity} matrices; got {len(args)}.')
    _emit(name, command.handler(args), out)
  except app.UsageError as e:
    err.write(f'phlat {name}: {e}\n')
    return settings.ExitCode.USAGE
  except errors.LimitError as e:
    err.write(f'phlat {name}: {e}\n')
    return settings.ExitCode.LIMIT
  except errors.InvalidInputError as e:
    err.write(f'phlat {name}: {e}\n')
    return settings.ExitCode.INVALID_INPUT
  return settings.ExitCode.OK


def main(argv: Sequence[str]) -> None:
  sys.exit(dispatch(argv))


def run() -> None:
  app.run(main)


if __name__ == '__main__':
  run()
