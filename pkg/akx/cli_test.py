# python3
# Copyright 2019 Google LLC
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ==============================================================================
"""Tests for the akx command line tool."""
import contextlib
import io
import json
import os.path
import socket
import threading
import time
from unittest import mock

from absl import flags
from absl.testing import flagsaver
from absl.testing import parameterized
import numpy as np
from akx import cli
from akx.core import amalgam
from akx.core import braid
from akx.protocol import handshake
from absl.testing import absltest

FLAGS = flags.FLAGS

EXAMPLE_PARAMS = os.path.join(os.path.dirname(__file__), 'testdata',
                              'example_params.json')


def run(*args):
  """Runs the tool, returning (exit code, stdout lines)."""
  out = io.StringIO()
  with contextlib.redirect_stdout(out):
    code = cli.main(['akx'] + list(args))
  return code, out.getvalue().splitlines()


def free_port():
  with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as s:
    s.bind(('127.0.0.1', 0))
    return s.getsockname()[1]


class OracleTest(parameterized.TestCase):

  def test_braid_relation(self):
    with flagsaver.flagsaver(strands=3, word='x1 x2 x1 x2^-1 x1^-1 x2^-1'):
      code, lines = run('oracle', 'braid')
    self.assertEqual(code, cli.EXIT_OK)
    self.assertEqual(lines, ['trivial', 'e'])

  def test_braid_nontrivial(self):
    with flagsaver.flagsaver(strands=2, word='x1 x1'):
      code, lines = run('oracle', 'braid')
    self.assertEqual(code, cli.EXIT_NEGATIVE)
    self.assertEqual(lines, ['nontrivial', 'x1 x1'])

  def test_thompson_relation(self):
    with flagsaver.flagsaver(word='y2 y0 y3^-1 y0^-1'):
      code, lines = run('oracle', 'thompson')
    self.assertEqual(code, cli.EXIT_OK)
    self.assertEqual(lines[0], 'trivial')

  def test_thompson_json(self):
    with flagsaver.flagsaver(word='y2 y0', json=True):
      code, lines = run('oracle', 'thompson')
    self.assertEqual(code, cli.EXIT_NEGATIVE)
    self.assertEqual(json.loads('\n'.join(lines)),
                     {'verdict': 'nontrivial', 'normal_form': 'y0 y3'})

  @parameterized.parameters(
      (3, 'x3'),
      (3, 'x1 q'),
      (1, 'x1'),
      (3, None),
  )
  def test_malformed_input(self, strands, word):
    with flagsaver.flagsaver(strands=strands, word=word):
      code, _ = run('oracle', 'braid')
    self.assertEqual(code, cli.EXIT_USAGE)

  def test_guard(self):
    with mock.patch.object(braid, 'handle_reduce',
                           side_effect=braid.ReductionGuardError('guard')):
      with flagsaver.flagsaver(strands=3, word='x1'):
        code, _ = run('oracle', 'braid')
    self.assertEqual(code, cli.EXIT_GUARD)


class DispatchTest(parameterized.TestCase):

  @parameterized.parameters([()], [('oracle',)], [('params', 'make')],
                            [('frobnicate',)])
  def test_unknown_command(self, args):
    code, _ = run(*args)
    self.assertEqual(code, cli.EXIT_USAGE)

  @parameterized.parameters(
      ('--max-len=3', '--max_len=3'),
      ('--keep-alive', '--keep_alive'),
      ('--word=x1-2', '--word=x1-2'),
      ('-o', '-o'),
      ('x1-2', 'x1-2'),
  )
  def test_normalize_flag(self, arg, expected):
    self.assertEqual(cli._normalize_flag(arg), expected)

  def test_parse_flags(self):
    with flagsaver.flagsaver():
      argv = cli.parse_flags(['akx', 'attack', '--max-len=4', '--keep-alive'])
      self.assertEqual(argv, ['akx', 'attack'])
      self.assertEqual(FLAGS.max_len, 4)
      self.assertTrue(FLAGS.keep_alive)

  def test_parse_flags_error(self):
    with flagsaver.flagsaver():
      with self.assertRaises(SystemExit) as cm:
        cli.parse_flags(['akx', 'demo', '--no-such-flag'])
    self.assertEqual(cm.exception.code, cli.EXIT_USAGE)


class WorkflowTest(absltest.TestCase):

  def test_params_gen_is_deterministic(self):
    paths = [os.path.join(FLAGS.test_tmpdir, 'gen{}.json'.format(i))
             for i in range(2)]
    for path in paths:
      with flagsaver.flagsaver(n=2, m=3, p=2, wlen=4, private_length=5,
                               seed=11, output=path):
        code, _ = run('params', 'gen')
      self.assertEqual(code, cli.EXIT_OK)
    contents = []
    for path in paths:
      with open(path) as f:
        contents.append(f.read())
    self.assertEqual(contents[0], contents[1])
    params = amalgam.load_params(paths[0])
    self.assertEqual((params.n, params.m, params.p, params.L), (2, 3, 2, 5))

  def test_params_gen_stdout(self):
    with flagsaver.flagsaver(n=2, m=3, p=2, wlen=2, seed=1, output=None):
      code, lines = run('params', 'gen')
    self.assertEqual(code, cli.EXIT_OK)
    amalgam.validate(amalgam.PlatformParams.from_config(
        json.loads('\n'.join(lines))))

  def test_demo(self):
    with flagsaver.flagsaver(params=EXAMPLE_PARAMS, seed=7):
      code, lines = run('demo')
      _, again = run('demo')
    self.assertEqual(code, cli.EXIT_OK)
    self.assertLen(lines, 2)
    self.assertEqual(lines[0], lines[1])
    self.assertLen(bytes.fromhex(lines[0]), 32)
    self.assertEqual(lines, again)

  def test_missing_params_file(self):
    with flagsaver.flagsaver(
        params=os.path.join(FLAGS.test_tmpdir, 'missing.json')):
      code, _ = run('demo')
    self.assertEqual(code, cli.EXIT_USAGE)

  def test_demo_then_attack(self):
    params_path = os.path.join(FLAGS.test_tmpdir, 'small.json')
    transcript_path = os.path.join(FLAGS.test_tmpdir, 'transcript.json')
    with flagsaver.flagsaver(n=2, m=3, p=2, wlen=3, private_length=2, seed=3,
                             output=params_path):
      self.assertEqual(run('params', 'gen')[0], cli.EXIT_OK)
    with flagsaver.flagsaver(params=params_path, seed=4,
                             output=transcript_path):
      self.assertEqual(run('demo')[0], cli.EXIT_OK)
    transcript = handshake.load_transcript(transcript_path)
    self.assertIsNotNone(transcript.expansions)

    with flagsaver.flagsaver(params=params_path, transcript=transcript_path,
                             method='brute', max_len=2, budget=1000,
                             json=True):
      code, lines = run('attack')
    self.assertEqual(code, cli.EXIT_OK)
    report = json.loads('\n'.join(lines))
    self.assertEqual(report['method'], 'brute')
    self.assertTrue(report['equivalent_to_secret'])

    with flagsaver.flagsaver(params=params_path, transcript=transcript_path,
                             method='length', budget=0):
      code, lines = run('attack')
    self.assertEqual(code, cli.EXIT_NEGATIVE)
    self.assertIn('found: none', lines)

    with flagsaver.flagsaver(params=EXAMPLE_PARAMS,
                             transcript=transcript_path):
      code, _ = run('attack')
    self.assertEqual(code, cli.EXIT_USAGE)

  def test_serve_and_connect(self):
    port = free_port()
    results = {}
    out = io.StringIO()
    with flagsaver.flagsaver(params=EXAMPLE_PARAMS, port=port, seed=5):
      with contextlib.redirect_stdout(out):
        server = threading.Thread(
            target=lambda: results.setdefault('serve', cli.main(
                ['akx', 'serve'])), daemon=True)
        server.start()
        code = cli.EXIT_USAGE
        for _ in range(50):
          code = cli.main(['akx', 'connect', '127.0.0.1:{}'.format(port)])
          if code == cli.EXIT_OK:
            break
          time.sleep(0.1)
        server.join(10)
    self.assertEqual(code, cli.EXIT_OK)
    self.assertEqual(results['serve'], cli.EXIT_OK)
    lines = out.getvalue().split()
    self.assertLen(lines, 2)
    self.assertEqual(lines[0], lines[1])

  def test_connect_needs_address(self):
    with flagsaver.flagsaver(params=EXAMPLE_PARAMS):
      self.assertEqual(run('connect')[0], cli.EXIT_USAGE)
      self.assertEqual(run('connect', 'nowhere')[0], cli.EXIT_USAGE)

  def test_connect_refused(self):
    port = free_port()
    with flagsaver.flagsaver(params=EXAMPLE_PARAMS):
      code, lines = run('connect', '127.0.0.1:{}'.format(port))
    self.assertEqual(code, cli.EXIT_NEGATIVE)
    self.assertEmpty(lines)


class BenchTest(absltest.TestCase):

  def test_run_bench(self):
    results = cli.run_bench(1, np.random.RandomState(0))
    self.assertEqual(results['braid_ms'].dims, ('word_length',))
    expected_shape = (len(cli.BENCH_GENERATORS), len(cli.BENCH_PRIVATE_LENGTHS))
    self.assertEqual(results['handshake_ms'].shape, expected_shape)
    self.assertTrue((results['thompson_ms'] >= 0).all())

  def test_bench_json(self):
    with flagsaver.flagsaver(bench_trials=1, seed=0, json=True):
      code, lines = run('bench')
    self.assertEqual(code, cli.EXIT_OK)
    data = json.loads('\n'.join(lines))
    self.assertIn('handshake_ms', data['data_vars'])


if __name__ == '__main__':
  absltest.main()
