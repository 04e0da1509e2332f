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
"""The akx command line tool.

Usage:
  akx params gen --n N --m M --p P --wlen LEN [--private_length L] --seed S -o F
  akx oracle braid --strands M --word "x1 x2^-1"
  akx oracle thompson --word "y2 y0 y3^-1 y0^-1"
  akx demo --params F [--seed S] [--output TRANSCRIPT]
  akx serve --port P --params F [--keep_alive]
  akx connect HOST:PORT --params F
  akx attack --params F --transcript T --method brute|length --max_len K
      --budget B [--json]
  akx bench [--bench_trials R] [--seed S]

Hyphenated spellings such as --max-len and --keep-alive are accepted.

Exit status: 0 success or agreement, 1 negative result, 2 usage or format
error, 3 internal guard tripped.
"""
import json
import sys
import time
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from absl import app
from absl import flags
from absl import logging
import numpy as np
from akx.attack import csp
from akx.core import amalgam
from akx.core import braid
from akx.core import thompson
from akx.core import words
from akx.protocol import handshake
from akx.protocol import transport
import xarray

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_GUARD = 3

# shared
flags.DEFINE_integer(
    'seed', None,
    'Seed making every random choice of the command deterministic.')
flags.DEFINE_bool(
    'json', False,
    'Print machine-readable JSON instead of text.')
flags.DEFINE_string(
    'params', None,
    'Path to a JSON parameter file.')
flags.DEFINE_string(
    'output', None,
    'Output file: parameters for `params gen`, transcript for `demo`.',
    short_name='o')

# params gen
flags.DEFINE_integer('n', 3, 'Number of amalgamated generator pairs.')
flags.DEFINE_integer('m', 4, 'Number of braid strands.')
flags.DEFINE_integer('p', 3, 'Thompson input index cap.')
flags.DEFINE_integer('wlen', 4, 'Length of each defining word.')
flags.DEFINE_integer('private_length', 16, 'Length L of private words.')

# oracles
flags.DEFINE_integer('strands', 3, 'Braid strands for `oracle braid`.')
flags.DEFINE_string('word', None, 'Word in textual syntax.')
flags.DEFINE_integer(
    'index_cap', None,
    'Thompson index cap; defaults to the largest index in --word.')

# network
flags.DEFINE_string('host', '127.0.0.1', 'Address `serve` listens on.')
flags.DEFINE_integer('port', 0, 'Port `serve` listens on.')
flags.DEFINE_bool(
    'keep_alive', False,
    'Keep serving handshakes instead of exiting after one.')

# attack
flags.DEFINE_string('transcript', None, 'Path to a transcript JSON file.')
flags.DEFINE_enum(
    'method', csp.Method.BRUTE_FORCE.value, sorted(csp.METHODS),
    'Attack method.')
flags.DEFINE_integer('max_len', 3, 'Longest conjugator for brute force.')
flags.DEFINE_integer('budget', 10000, 'Maximum candidates to score.')

# bench
flags.DEFINE_integer('bench_trials', 20, 'Repetitions per benchmark cell.')

FLAGS = flags.FLAGS

BENCH_WORD_LENGTHS = (16, 64, 256)
BENCH_GENERATORS = (2, 4, 6)
BENCH_PRIVATE_LENGTHS = (8, 32, 64)


def _print_json(value):
  print(json.dumps(value, indent=2, sort_keys=True))


def _load_params() -> amalgam.PlatformParams:
  if FLAGS.params is None:
    raise ValueError('--params is required')
  return amalgam.load_params(FLAGS.params)


def params_gen(args: Sequence[str]) -> int:
  del args  # unused
  rng = np.random.RandomState(FLAGS.seed)
  params = amalgam.random_params(
      FLAGS.n, FLAGS.m, FLAGS.p, FLAGS.wlen, FLAGS.private_length, rng)
  if FLAGS.output:
    amalgam.save_params(params, FLAGS.output)
    logging.info('wrote parameters to %s', FLAGS.output)
  else:
    _print_json(params.to_config())
  return EXIT_OK


def _require_word() -> words.Word:
  if FLAGS.word is None:
    raise ValueError('--word is required')
  return words.parse_word(FLAGS.word)


def _report_oracle(trivial: bool, reduced: words.Word, label: str) -> int:
  verdict = 'trivial' if trivial else 'nontrivial'
  if FLAGS.json:
    _print_json({'verdict': verdict, label: words.format_word(reduced)})
  else:
    print(verdict)
    print(words.format_word(reduced))
  return EXIT_OK if trivial else EXIT_NEGATIVE


def oracle_braid(args: Sequence[str]) -> int:
  del args  # unused
  ctx = braid.BraidContext(FLAGS.strands)
  ctx.validate()
  reduced = braid.handle_reduce(ctx, _require_word())
  return _report_oracle(not reduced, reduced, 'reduced')


def oracle_thompson(args: Sequence[str]) -> int:
  del args  # unused
  word = _require_word()
  cap = FLAGS.index_cap
  if cap is None:
    cap = max([1] + [letter.index for letter in word])
  nf = thompson.normal_form(thompson.ThompsonContext(cap), word)
  return _report_oracle(nf.is_identity(), nf.to_word(), 'normal_form')


def _seeded_rngs() -> Tuple[np.random.RandomState, np.random.RandomState]:
  if FLAGS.seed is None:
    return np.random.RandomState(), np.random.RandomState()
  return (np.random.RandomState(FLAGS.seed),
          np.random.RandomState(FLAGS.seed + 1))


def demo(args: Sequence[str]) -> int:
  del args  # unused
  params = _load_params()
  rng_a, rng_b = _seeded_rngs()
  key_a, key_b, transcript = handshake.run_handshake(
      params, rng_a, params, rng_b)
  if FLAGS.output:
    handshake.save_transcript(transcript.with_expansions(), FLAGS.output)
    logging.info('wrote transcript to %s', FLAGS.output)
  agreed = key_a == key_b
  if FLAGS.json:
    _print_json({'sender': key_a.hex(), 'receiver': key_b.hex(),
                 'agreed': agreed})
  else:
    print(key_a.hex())
    print(key_b.hex())
  return EXIT_OK if agreed else EXIT_NEGATIVE


def serve(args: Sequence[str]) -> int:
  del args  # unused
  server = transport.Server(_load_params(), seed=FLAGS.seed)
  try:
    server.bind(FLAGS.host, FLAGS.port)
    if FLAGS.keep_alive:
      server.serve_forever()
    else:
      print(server.serve_once().hex())
  finally:
    server.close()
  return EXIT_OK


def connect(args: Sequence[str]) -> int:
  if len(args) != 1:
    raise ValueError('connect expects HOST:PORT')
  host, port = transport.parse_address(args[0])
  params = _load_params()
  try:
    key = transport.connect(host, port, params, seed=FLAGS.seed)
  except OSError as e:
    logging.warning('handshake with %s:%d failed: %r', host, port, e)
    return EXIT_NEGATIVE
  print(key.hex())
  return EXIT_OK


def attack(args: Sequence[str]) -> int:
  del args  # unused
  params = _load_params()
  if FLAGS.transcript is None:
    raise ValueError('--transcript is required')
  transcript = handshake.load_transcript(FLAGS.transcript)
  if transcript.params != params:
    raise amalgam.ParameterError(
        'params', 'transcript was recorded with different parameters')
  report = csp.run_attack(FLAGS.method, params, transcript.m1,
                          FLAGS.max_len, FLAGS.budget)
  if FLAGS.json:
    _print_json(report.to_config())
  else:
    found = ('none' if report.found is None
             else words.format_word(report.found))
    print('method: {}'.format(report.method.value))
    print('found: {}'.format(found))
    print('equivalent_to_secret: {}'.format(report.equivalent_to_secret))
    print('nodes_explored: {}'.format(report.nodes_explored))
  return EXIT_OK if report.found is not None else EXIT_NEGATIVE


def _time_ms(fn: Callable[[], object], trials: int) -> float:
  start = time.perf_counter()
  for _ in range(trials):
    fn()
  return 1000 * (time.perf_counter() - start) / trials


def run_bench(trials: int, rng: np.random.RandomState) -> xarray.Dataset:
  """Times the oracles and full handshakes over a parameter grid."""
  braid_ctx = braid.BraidContext(4)
  thompson_ctx = thompson.ThompsonContext(3)
  braid_ms = []
  thompson_ms = []
  for length in BENCH_WORD_LENGTHS:
    b = words.random_word(braid_ctx.alphabet, length, rng)
    t = words.random_word(thompson_ctx.alphabet, length, rng)
    braid_ms.append(_time_ms(lambda: braid.handle_reduce(braid_ctx, b),
                             trials))
    thompson_ms.append(_time_ms(
        lambda: thompson.normal_form(thompson_ctx, t), trials))
  handshake_ms = np.zeros((len(BENCH_GENERATORS), len(BENCH_PRIVATE_LENGTHS)))
  for i, n in enumerate(BENCH_GENERATORS):
    for j, private_length in enumerate(BENCH_PRIVATE_LENGTHS):
      params = amalgam.random_params(n, 4, 3, 4, private_length, rng)
      handshake_ms[i, j] = _time_ms(
          lambda: handshake.run_handshake(params, rng, params, rng), trials)
  return xarray.Dataset(
      {
          'braid_ms': (('word_length',), braid_ms),
          'thompson_ms': (('word_length',), thompson_ms),
          'handshake_ms': (('n', 'L'), handshake_ms),
      },
      coords={
          'word_length': list(BENCH_WORD_LENGTHS),
          'n': list(BENCH_GENERATORS),
          'L': list(BENCH_PRIVATE_LENGTHS),
      })


def bench(args: Sequence[str]) -> int:
  del args  # unused
  results = run_bench(FLAGS.bench_trials, np.random.RandomState(FLAGS.seed))
  if FLAGS.json:
    _print_json(results.to_dict())
  else:
    for name in ('braid_ms', 'thompson_ms', 'handshake_ms'):
      print('{} (milliseconds per call)'.format(name))
      print(results[name].to_pandas().round(3).to_string())
      print()
  return EXIT_OK


COMMANDS = {
    ('params', 'gen'): params_gen,
    ('oracle', 'braid'): oracle_braid,
    ('oracle', 'thompson'): oracle_thompson,
    ('demo',): demo,
    ('serve',): serve,
    ('connect',): connect,
    ('attack',): attack,
    ('bench',): bench,
}  # type: Dict[Tuple[str, ...], Callable[[Sequence[str]], int]]


def _usage(message: str) -> int:
  sys.stderr.write('akx: {}\n{}'.format(message, __doc__))
  return EXIT_USAGE


def _match_command(
    args: List[str]) -> Optional[Tuple[Callable[[Sequence[str]], int],
                                       List[str]]]:
  for name, command in COMMANDS.items():
    if tuple(args[:len(name)]) == name:
      return command, args[len(name):]
  return None


def main(argv: Sequence[str]) -> int:
  match = _match_command(list(argv[1:]))
  if match is None:
    return _usage('unknown command: {}'.format(' '.join(argv[1:]) or '(none)'))
  command, args = match
  try:
    return command(args)
  except braid.ReductionGuardError as e:
    sys.stderr.write('akx: guard tripped: {}\n'.format(e))
    return EXIT_GUARD
  except (ValueError, OSError) as e:
    sys.stderr.write('akx: {}\n'.format(e))
    return EXIT_USAGE


def _normalize_flag(arg: str) -> str:
  """Rewrites --max-len=3 as --max_len=3."""
  if not arg.startswith('--'):
    return arg
  name, sep, value = arg[2:].partition('=')
  return '--' + name.replace('-', '_') + sep + value


def parse_flags(argv: Sequence[str]) -> List[str]:
  try:
    return FLAGS([_normalize_flag(arg) for arg in argv])
  except flags.Error as e:
    sys.stderr.write('akx: {}\n{}'.format(e, __doc__))
    sys.exit(EXIT_USAGE)


def run():
  app.run(main, flags_parser=parse_flags)


if __name__ == '__main__':
  run()
