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

"""Unit tests for `cli.py`."""

import io
import json
import os
from unittest import mock

from absl.testing import absltest
from absl.testing import flagsaver
from absl.testing import parameterized
import jsonschema

from phlat._src import cli
from phlat._src import counting
from phlat._src import exact_linalg
from phlat._src import settings

IntMatrix = exact_linalg.IntMatrix

_B = '1 1 2; 0 2 0; 0 0 3'
_C = '1 0 2; 0 1 3; 0 0 6'
_NOT_C = '1 0 1; 0 1 0; 0 0 7'
_SCHEMA_PATH = os.path.join(
    os.path.dirname(os.path.dirname(cli.__file__)), 'schemas',
    'output.schema.json')


def _run(*argv, **overrides):
  out, err = io.StringIO(), io.StringIO()
  overrides.setdefault('cache', False)
  with flagsaver.flagsaver(**overrides):
    code = cli.dispatch(['phlat'] + list(argv), out=out, err=err)
  return code, out.getvalue(), err.getvalue()


def _run_json(*argv, **overrides):
  code, out, err = _run(*argv, json=True, **overrides)
  assert code == settings.ExitCode.OK, err
  return json.loads(out)


class DispatchTest(parameterized.TestCase):

  def test_equiv_with_certificate(self):
    code, out, _ = _run('equiv', _B, _C, certificate=True)
    self.assertEqual(code, settings.ExitCode.OK)
    self.assertEqual(out.splitlines()[0], 'EQUIVALENT')
    payload = _run_json('equiv', _B, _C, certificate=True)
    b, c = exact_linalg.parse_matrix(_B), exact_linalg.parse_matrix(_C)
    u = IntMatrix(payload['u']['data'])
    p = IntMatrix(payload['p']['data'])
    self.assertEqual(u @ b, c @ p)
    self.assertEqual(abs(exact_linalg.determinant(u)), 1)

  def test_outputs_validate_against_schema(self):
    with open(_SCHEMA_PATH) as f:
      schema = json.load(f)
    runs = [
        (('reduce', _B), {}),
        (('invariants', _B), {'all_subsets': True}),
        (('op', _B), {}),
        (('equiv', _B, _C), {'certificate': True}),
        (('equiv', _B, _NOT_C), {'certificate': True}),
        (('orbit', _B), {}),
        (('enumerate',), {'n': 2, 'd': 6}),
        (('enumerate',), {'n': 3, 'd': 4, 'classes': True}),
        (('count',), {'n': 3, 'd': 6, 'method': 'both'}),
        (('density',), {'n': 3, 'pmax': 2_000}),
        (('constants',), {'pmax': 2_000}),
        (('mc',), {'n': 3, 'bound': 5, 'samples': 100}),
        (('orbitlab',), {'n': 3, 'k': 1, 'p': 3}),
        (('orbitlab', '1 1', '1 2'), {'p': 5}),
    ]
    for argv, overrides in runs:
      payload = _run_json(*argv, **overrides)
      self.assertEqual(payload['command'], argv[0])
      jsonschema.validate(instance=payload, schema=schema)

  def test_schema_rejects_malformed_payload(self):
    with open(_SCHEMA_PATH) as f:
      schema = json.load(f)
    payload = _run_json('orbitlab', n=3, k=1, p=3)
    for stratum in payload['strata'].values():
      stratum['sizes'] = str(stratum['sizes'])
    with self.assertRaises(jsonschema.ValidationError):
      jsonschema.validate(instance=payload, schema=schema)
    payload = _run_json('equiv', _B, _NOT_C, certificate=True)
    payload['separated_by'] = 'luck'
    with self.assertRaises(jsonschema.ValidationError):
      jsonschema.validate(instance=payload, schema=schema)

  def test_not_equivalent(self):
    payload = _run_json('equiv', _B, _NOT_C, certificate=True)
    self.assertFalse(payload['equivalent'])
    self.assertEqual(payload['separated_by'], 'determinant')

  def test_column_content_rejected(self):
    code, _, err = _run('equiv', _B, '1 0 0; 0 1 0; 0 0 7')
    self.assertEqual(code, settings.ExitCode.INVALID_INPUT)
    self.assertIn('not weakly nonsingular', err)

  @parameterized.parameters((9, 23), (25, 135), (49, 477))
  def test_count_both(self, d, expected):
    code, out, _ = _run('count', n=3, d=d, method='both')
    self.assertEqual(code, settings.ExitCode.OK)
    self.assertEqual(out.strip(), f'{expected} / {expected}')

  def test_count_formula_needs_size_three(self):
    code, _, err = _run('count', n=4, d=6, method='formula')
    self.assertEqual(code, settings.ExitCode.INVALID_INPUT)
    self.assertIn('n = 3', err)

  def test_count_needs_d(self):
    code, _, _ = _run('count', n=3, d=None)
    self.assertEqual(code, settings.ExitCode.USAGE)

  def test_census_cache(self):
    root = self.create_tempdir().full_path
    with mock.patch.dict(os.environ, {settings.CACHE_ENV_VAR: root}):
      code, out, _ = _run('count', n=3, d=9, method='census', cache=True)
      self.assertEqual(code, settings.ExitCode.OK)
      self.assertEqual(out.strip(), '23')
      path = settings.census_path(3, 9)
      self.assertTrue(path.startswith(root))
      self.assertTrue(os.path.exists(path))
      self.assertEqual(counting.load_census(3, 9).classes, 23)

  def test_reduce_rejects_non_square(self):
    code, _, err = _run('reduce', '1 1')
    self.assertEqual(code, settings.ExitCode.INVALID_INPUT)
    self.assertNotEmpty(err)

  def test_reduce_output_reparses(self):
    code, out, _ = _run('reduce', '2 1 0; 1 1 1; 0 0 6')
    self.assertEqual(code, settings.ExitCode.OK)
    reduced = exact_linalg.parse_matrix(out.splitlines()[0])
    self.assertEqual(reduced, exact_linalg.hermite_form(
        exact_linalg.parse_matrix('2 1 0; 1 1 1; 0 0 6')))

  def test_reduce_json(self):
    payload = _run_json('reduce', _B)
    self.assertEqual(payload['command'], 'reduce')
    self.assertEqual(payload['class_one_block_sizes'], [1, 2])
    self.assertEqual(payload['max_one_block'], 2)

  def test_bad_matrix(self):
    code, _, _ = _run('reduce', '1 x; 0 1')
    self.assertEqual(code, settings.ExitCode.INVALID_INPUT)

  @parameterized.parameters([], ['frobnicate'])
  def test_unknown_command(self, *argv):
    code, _, err = _run(*argv)
    self.assertEqual(code, settings.ExitCode.USAGE)
    self.assertIn('Commands:', err)

  def test_wrong_arity(self):
    code, _, _ = _run('equiv', _B)
    self.assertEqual(code, settings.ExitCode.USAGE)

  def test_limit(self):
    code, _, _ = _run('enumerate', n=7, d=2, classes=True)
    self.assertEqual(code, settings.ExitCode.LIMIT)

  def test_invariants(self):
    payload = _run_json('invariants', _C, all_subsets=True)
    self.assertEqual(payload['j'], [6])
    self.assertLen(payload['j_tuple'], 3)
    self.assertLen(payload['lattice']['groups'], 8)

  def test_op(self):
    payload = _run_json('op', _C)
    bop = IntMatrix(payload['bop']['data'])
    c = exact_linalg.parse_matrix(_C)
    self.assertEqual(bop.T @ c, IntMatrix.diagonal(payload['delta']))

  def test_orbit(self):
    payload = _run_json('orbit', _C)
    terminal = [m for m in payload['members'] if m['terminal']]
    self.assertNotEmpty(terminal)
    self.assertEqual(payload['size'], len(payload['members']))

  def test_enumerate(self):
    code, out, _ = _run('enumerate', n=2, d=4)
    self.assertEqual(code, settings.ExitCode.OK)
    self.assertLen(out.splitlines(), counting.weakly_terminal_count(2, 4))
    for line in out.splitlines():
      self.assertEqual(exact_linalg.parse_matrix(line).rows, 2)

  def test_enumerate_classes(self):
    payload = _run_json('enumerate', n=3, d=30, classes=True)
    self.assertLen(payload['classes'], counting.ph_count_3(30))


class NumericCommandsTest(parameterized.TestCase):

  def test_density(self):
    payload = _run_json('density', n=3, pmax=2_000)
    self.assertAlmostEqual(float(payload['tf_density']['value']), 0.5564,
                           delta=0.01)
    self.assertAlmostEqual(float(payload['ns_density']), 0.5757, delta=1e-3)

  def test_constants(self):
    payload = _run_json('constants', pmax=2_000)
    constants = payload['constants']
    self.assertIn('F(8)', constants)
    self.assertAlmostEqual(float(constants['F(0)']['value']), 1.943596,
                           delta=1e-3)

  def test_mc_records_seed_and_ignores_threads(self):
    _, one, _ = _run('mc', n=3, bound=10, samples=3_000, seed=7, threads=1)
    _, three, _ = _run('mc', n=3, bound=10, samples=3_000, seed=7, threads=3)
    self.assertEqual(one, three)
    self.assertTrue(one.startswith('# seed = 7'))

  def test_mc_limit(self):
    code, _, _ = _run('mc', n=9, bound=10, samples=10)
    self.assertEqual(code, settings.ExitCode.LIMIT)

  def test_orbitlab_top_stratum(self):
    payload = _run_json('orbitlab', n=5, k=2, p=7, top_only=True)
    self.assertEqual(payload['strata']['10']['orbits'], 1)

  def test_orbitlab_full(self):
    payload = _run_json('orbitlab', n=4, k=2, p=3)
    self.assertEqual(payload['matrices'], (81 - 1) * (81 - 3))

  def test_orbitlab_duality_experiment(self):
    payload = _run_json('orbitlab', '1 2; 2 1', '1 2; 2 1', p=7)
    self.assertTrue(payload['chain_holds'])

  def test_orbitlab_budget(self):
    code, _, _ = _run('orbitlab', n=5, k=2, p=11)
    self.assertEqual(code, settings.ExitCode.LIMIT)


if __name__ == '__main__':
  absltest.main()
