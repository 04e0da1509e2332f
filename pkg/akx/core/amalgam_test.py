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
"""Tests for amalgam."""
import os.path

from absl import flags
from absl.testing import parameterized
import numpy as np
from akx.core import amalgam
from akx.core import braid
from akx.core import nilpotent
from akx.core import thompson
from akx.core import words
from absl.testing import absltest

FLAGS = flags.FLAGS

parse = words.parse_word

EXAMPLE_PARAMS = os.path.join(
    os.path.dirname(os.path.dirname(__file__)), 'testdata',
    'example_params.json')


def make_params(**overrides):
  kwargs = dict(
      n=2, m=3, p=2,
      w=(parse('x1'), parse('x2')),
      u=(parse('y0'), parse('y1')),
      L=8)
  kwargs.update(overrides)
  return amalgam.PlatformParams(**kwargs)


class PlatformParamsTest(parameterized.TestCase):

  def test_minimal_instance(self):
    amalgam.validate(make_params())

  @parameterized.parameters(
      (dict(w=(parse('x1 x1^-1'), parse('x2'))), 'w_1'),
      (dict(w=(parse('x1 x2 x1 x2^-1 x1^-1 x2^-1'), parse('x2'))), 'w_1'),
      (dict(u=(parse('y0'), parse('y2 y0 y3^-1 y0^-1'))), 'u_2'),
      (dict(n=1, w=(parse('x1'),), u=(parse('y0'),)), 'n'),
      (dict(m=1), 'm'),
      (dict(p=0), 'p'),
      (dict(L=0), 'L'),
      (dict(version=2), 'version'),
      (dict(w=(parse('x1'),)), 'w'),
      (dict(u=(parse('y0'), ())), 'u_2'),
      (dict(w=(parse('x1'), parse('y1'))), 'w_2'),
      (dict(w=(parse('x3'), parse('x2'))), 'w_1'),
      (dict(u=(parse('y0'), parse('y3'))), 'u_2'),
  )
  def test_validate_errors(self, overrides, field):
    with self.assertRaises(amalgam.ParameterError) as cm:
      amalgam.validate(make_params(**overrides))
    self.assertEqual(cm.exception.field, field)

  def test_config(self):
    params = make_params(w=(parse('x1 x2^-1'), parse('x2')))
    config = params.to_config()
    self.assertEqual(config['w'], ['x1 x2^-1', 'x2'])
    self.assertEqual(amalgam.PlatformParams.from_config(config), params)

  def test_save_and_load(self):
    params = make_params()
    path = os.path.join(FLAGS.test_tmpdir, 'params.json')
    amalgam.save_params(params, path)
    self.assertEqual(amalgam.load_params(path), params)

  def test_load_example(self):
    params = amalgam.load_params(EXAMPLE_PARAMS)
    self.assertEqual(params.n, 3)
    self.assertEqual(params.m, 4)
    self.assertEqual(params.L, 16)

  def test_random_params(self):
    rng = np.random.RandomState(0)
    params = amalgam.random_params(3, 4, 3, 5, 10, rng)
    amalgam.validate(params)
    self.assertEqual(params.n, 3)
    self.assertEqual(params.L, 10)
    self.assertTrue(all(len(word) == 5 for word in params.w + params.u))
    again = amalgam.random_params(3, 4, 3, 5, 10, np.random.RandomState(0))
    self.assertEqual(params, again)
    with self.assertRaises(amalgam.ParameterError):
      amalgam.random_params(2, 3, 2, 0, 4, rng)
    with self.assertRaises(amalgam.ParameterError):
      amalgam.random_params(1, 3, 2, 2, 4, rng)


class TokenTest(parameterized.TestCase):

  def test_eval_generator(self):
    self.assertEqual(amalgam.eval_token(parse('W1'), 3),
                     nilpotent.generator(3, 1))
    self.assertEqual(amalgam.eval_token(parse('U2'), 3),
                     nilpotent.generator(3, 2))

  def test_amalgamation(self):
    self.assertTrue(amalgam.eval_token(parse('U1 W1^-1'), 2).is_identity())

  def test_commutator(self):
    c = amalgam.eval_token(amalgam.commutator_tokens(1, 2), 2)
    self.assertEqual(c.a, (0, 0))
    self.assertEqual(c.m, (1,))
    self.assertEqual(amalgam.commutator_tokens(1, 2),
                     parse('W1 U2 W1^-1 U2^-1'))

  def test_eval_matches_mul(self):
    rng = np.random.RandomState(1)
    for _ in range(200):
      n = int(rng.randint(2, 5))
      tw = words.random_word(
          words.Alphabet.for_family(words.Family.TOKEN_U, n), 12, rng)
      expected = nilpotent.identity(n)
      for letter in tw:
        h = nilpotent.generator(n, letter.index)
        expected = nilpotent.mul(
            expected, h if letter.sign > 0 else nilpotent.inv(h))
      self.assertEqual(amalgam.eval_token(tw, n), expected)
      self.assertTrue(amalgam.eval_token(
          tw + words.invert(tw), n).is_identity())

  @parameterized.parameters('W3', 'U0', 'x1', 'W1 y0')
  def test_token_errors(self, text):
    with self.assertRaises(amalgam.TokenIndexError):
      amalgam.eval_token(parse(text), 2)

  def test_token_generator(self):
    self.assertEqual(amalgam.token_generator(words.Family.TOKEN_W, 2, -1),
                     parse('W2^-1')[0])
    with self.assertRaises(amalgam.TokenIndexError):
      amalgam.token_generator(words.Family.BRAID, 1)


class ExpandTest(parameterized.TestCase):

  @parameterized.parameters(
      (dict(w=(parse('x1 x2'), parse('x2'))), 'W1', 'x1 x2'),
      ({}, 'W1 W1^-1', 'e'),
      ({}, 'W1 U1', 'x1 y0'),
      (dict(w=(parse('x1 x2'), parse('x2'))), 'W1^-1 W2', 'x2^-1 x1^-1 x2'),
      ({}, 'U2^-1 W2 W2^-1 U2', 'e'),
  )
  def test_expand(self, overrides, tw, expected):
    params = make_params(**overrides)
    self.assertEqual(amalgam.expand(parse(tw), params), parse(expected))

  def test_pure_tokens_expand_to_trivial_words(self):
    params = amalgam.load_params(EXAMPLE_PARAMS)
    rng = np.random.RandomState(2)
    for family in amalgam.TOKEN_FAMILIES:
      alphabet = words.Alphabet.for_family(family, params.n)
      for _ in range(20):
        half = words.random_word(alphabet, 5, rng)
        # freely reduces to the empty token word
        tw = half + words.invert(half)
        expanded = amalgam.expand(tw, params)
        if family is words.Family.TOKEN_W:
          self.assertTrue(braid.is_trivial(params.braid_context, expanded))
        else:
          self.assertTrue(thompson.is_trivial(params.thompson_context,
                                              expanded))

  def test_expand_errors(self):
    with self.assertRaises(amalgam.TokenIndexError):
      amalgam.expand(parse('W3'), make_params())


class SegmentTest(parameterized.TestCase):

  def setUp(self):
    super().setUp()
    self.ctx_b = braid.BraidContext(4)
    self.ctx_t = thompson.ThompsonContext(3)

  def segment(self, text):
    return amalgam.segment(parse(text), self.ctx_b, self.ctx_t)

  @parameterized.parameters(
      ('x1 y0 x2', ('x1', 'y0', 'x2')),
      ('x1 y0 y0^-1 x1^-1', ()),
      ('x1 x1 y0', ('x1 x1', 'y0')),
      ('e', ()),
      ('x1 y2 y0 y3^-1 y0^-1 x2', ('x1 x2',)),
      ('x1 x3 x1^-1 x3^-1 y1', ('y1',)),
      ('x1 y0 y0^-1 x1^-1 x2 y1 x1 x2 x1 x2^-1 x1^-1 x2^-1 y1^-1 x2^-1',
       ()),
  )
  def test_segment(self, word, expected):
    self.assertEqual(self.segment(word), tuple(parse(s) for s in expected))

  def test_alternates_and_idempotent(self):
    rng = np.random.RandomState(3)
    b = self.ctx_b.alphabet
    t = self.ctx_t.alphabet
    for _ in range(100):
      word = ()
      for i in range(rng.randint(1, 6)):
        word += words.random_word(b if i % 2 else t, rng.randint(4), rng)
      segmentation = amalgam.segment(word, self.ctx_b, self.ctx_t)
      for first, second in zip(segmentation, segmentation[1:]):
        self.assertIsNot(first[0].family, second[0].family)
      for run in segmentation:
        self.assertTrue(words.is_pure(run))
        self.assertNotEmpty(run)
      flattened = tuple(letter for run in segmentation for letter in run)
      self.assertEqual(
          amalgam.segment(flattened, self.ctx_b, self.ctx_t), segmentation)

  def test_segment_lengths(self):
    self.assertEqual(amalgam.segment_lengths(self.segment('x1 x1 y0 x2')),
                     (2, 1, 1))

  def test_tokens_rejected(self):
    with self.assertRaises(amalgam.SegmentationError):
      self.segment('x1 W1')


class CentralityTest(parameterized.TestCase):

  @parameterized.parameters(2, 3)
  def test_all_triples(self, n):
    w = tuple(parse('x{}'.format(i)) for i in range(1, n + 1))
    u = tuple(parse('y{}'.format(i)) for i in range(n))
    params = make_params(n=n, m=n + 1, p=n, w=w, u=u)
    self.assertLen(amalgam.centrality_witness(params), n**3)
    self.assertIn((1, 1, 1), amalgam.centrality_witness(params))


if __name__ == '__main__':
  absltest.main()
