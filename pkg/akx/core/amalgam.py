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
"""Platform group: braid and Thompson groups amalgamated along H = K.

Public parameters name braid words w_1 ... w_n and Thompson words u_1 ... u_n.
The platform group identifies w_i = u_i and makes commutators of these
generators central. Honest parties compute with token words over the symbols
W_i and U_i; `eval_token` maps both W_i and U_i to the generator h_i of the
free class-2 nilpotent group, and `expand` realizes tokens as braid and
Thompson letters.
"""
import itertools
import json
import typing
from typing import Any, Dict, List, Mapping, Sequence, Tuple

from absl import logging
import numpy as np
from akx.core import braid
from akx.core import nilpotent
from akx.core import thompson
from akx.core import words

PARAMS_VERSION = 1

TOKEN_FAMILIES = (words.Family.TOKEN_W, words.Family.TOKEN_U)
TokenWord = words.Word
Segmentation = Tuple[words.Word, ...]


class ParameterError(ValueError):
  """Raised when platform parameters violate an invariant.

  Attributes:
    field: name of the offending parameter.
  """

  def __init__(self, field: str, message: str):
    super().__init__('{}: {}'.format(field, message))
    self.field = field


class TokenIndexError(ValueError):
  """Raised for token letters outside W_1..W_n / U_1..U_n."""


class SegmentationError(ValueError):
  """Raised when segmenting a word that still contains tokens."""


class PlatformParams(typing.NamedTuple):
  """Public data defining the platform group.

  Attributes:
    n: number of amalgamated generator pairs.
    m: braid strands.
    p: Thompson input index cap.
    w: braid defining words w_1 ... w_n.
    u: Thompson defining words u_1 ... u_n.
    L: length of private token words.
    version: parameter format version.
  """

  n: int
  m: int
  p: int
  w: Tuple[words.Word, ...]
  u: Tuple[words.Word, ...]
  L: int  # pylint: disable=invalid-name
  version: int = PARAMS_VERSION

  @property
  def braid_context(self) -> braid.BraidContext:
    return braid.BraidContext(self.m)

  @property
  def thompson_context(self) -> thompson.ThompsonContext:
    return thompson.ThompsonContext(self.p)

  @classmethod
  def from_config(cls, config: Mapping[str, Any]) -> 'PlatformParams':
    """Construct parameters from a configuration dict."""
    return cls(
        n=int(config['n']),
        m=int(config['m']),
        p=int(config['p']),
        w=tuple(words.parse_word(text) for text in config['w']),
        u=tuple(words.parse_word(text) for text in config['u']),
        L=int(config['L']),
        version=int(config['version']),
    )

  def to_config(self) -> Dict[str, Any]:
    """Create a configuration dict representing these parameters."""
    return dict(
        version=self.version,
        n=self.n,
        m=self.m,
        p=self.p,
        L=self.L,
        w=[words.format_word(word) for word in self.w],
        u=[words.format_word(word) for word in self.u],
    )


def load_params(path: str) -> PlatformParams:
  """Read and validate parameters saved as JSON."""
  with open(path) as f:
    params = PlatformParams.from_config(json.load(f))
  validate(params)
  return params


def save_params(params: PlatformParams, path: str):
  with open(path, 'w') as f:
    json.dump(params.to_config(), f, indent=2, sort_keys=True)
    f.write('\n')


def validate(params: PlatformParams):
  """Checks every PlatformParams invariant.

  Args:
    params: parameters to check.

  Raises:
    ParameterError: naming the first violated invariant.
  """
  if params.version != PARAMS_VERSION:
    raise ParameterError('version', 'unsupported version {}'.format(
        params.version))
  if params.n < 2:
    raise ParameterError('n', 'need at least 2 generators, got {}'.format(
        params.n))
  if params.m < 2:
    raise ParameterError('m', 'need at least 2 strands, got {}'.format(
        params.m))
  if params.p < 1:
    raise ParameterError('p', 'index cap must be positive, got {}'.format(
        params.p))
  if params.L < 1:
    raise ParameterError('L', 'private length must be positive, got {}'.format(
        params.L))
  for name, defining, family in (('w', params.w, words.Family.BRAID),
                                 ('u', params.u, words.Family.THOMPSON)):
    if len(defining) != params.n:
      raise ParameterError(name, 'expected {} words, got {}'.format(
          params.n, len(defining)))
    for i, word in enumerate(defining, start=1):
      field = '{}_{}'.format(name, i)
      if not word:
        raise ParameterError(field, 'defining word is empty')
      if words.free_reduce(word) != tuple(word):
        raise ParameterError(field, 'defining word is not freely reduced')
      if any(letter.family is not family for letter in word):
        raise ParameterError(field, 'expected only {} letters'.format(
            family.name))
  for i, word in enumerate(params.w, start=1):
    try:
      trivial = braid.is_trivial(params.braid_context, word)
    except braid.BraidWordError as e:
      raise ParameterError('w_{}'.format(i), str(e))
    if trivial:
      raise ParameterError('w_{}'.format(i), 'trivial in B_{}'.format(
          params.m))
  for i, word in enumerate(params.u, start=1):
    try:
      trivial = thompson.is_trivial(params.thompson_context, word)
    except thompson.ThompsonWordError as e:
      raise ParameterError('u_{}'.format(i), str(e))
    if trivial:
      raise ParameterError('u_{}'.format(i), 'trivial in F')


def random_params(
    n: int,
    m: int,
    p: int,
    word_length: int,
    private_length: int,
    rng: np.random.RandomState,
) -> PlatformParams:
  """Samples validated parameters with random defining words.

  Trivial defining words are resampled.

  Args:
    n: number of generator pairs.
    m: braid strands.
    p: Thompson index cap.
    word_length: length of each defining word.
    private_length: length L of private token words.
    rng: source of randomness.

  Returns:
    Validated PlatformParams.
  """
  if word_length < 1:
    raise ParameterError('wlen', 'defining words need at least one letter')
  braid_ctx = braid.BraidContext(m)
  thompson_ctx = thompson.ThompsonContext(p)

  def sample(alphabet, is_trivial):
    while True:
      word = words.random_word(alphabet, word_length, rng)
      if not is_trivial(word):
        return word

  w = tuple(sample(braid_ctx.alphabet,
                   lambda x: braid.is_trivial(braid_ctx, x))
            for _ in range(n))
  u = tuple(sample(thompson_ctx.alphabet,
                   lambda x: thompson.is_trivial(thompson_ctx, x))
            for _ in range(n))
  params = PlatformParams(n=n, m=m, p=p, w=w, u=u, L=private_length)
  validate(params)
  return params


def token_generator(family: words.Family, i: int,
                    sign: int = 1) -> words.Letter:
  if family not in TOKEN_FAMILIES:
    raise TokenIndexError('{} is not a token family'.format(family))
  return words.Letter(family, i, sign)


def commutator_tokens(i: int, j: int) -> TokenWord:
  """The token word W_i U_j W_i^-1 U_j^-1."""
  return (words.Letter(words.Family.TOKEN_W, i, 1),
          words.Letter(words.Family.TOKEN_U, j, 1),
          words.Letter(words.Family.TOKEN_W, i, -1),
          words.Letter(words.Family.TOKEN_U, j, -1))


def _check_tokens(tw: Sequence[words.Letter], n: int):
  for letter in tw:
    if letter.family not in TOKEN_FAMILIES:
      raise TokenIndexError('letter {} is not a token'.format(letter))
    if not 1 <= letter.index <= n:
      raise TokenIndexError('token {} out of range 1..{}'.format(letter, n))


def eval_token(tw: Sequence[words.Letter], n: int) -> nilpotent.NilElement:
  """Image of a token word under W_i -> h_i, U_i -> h_i.

  Raises:
    TokenIndexError: on non-token letters or indices outside 1..n.
  """
  _check_tokens(tw, n)
  return nilpotent.collect(n, ((letter.index, letter.sign) for letter in tw))


def expand(tw: Sequence[words.Letter], params: PlatformParams) -> words.Word:
  """Substitutes defining words for tokens, giving a letter-layer word.

  Letters of different families never cancel, so freely reducing the whole
  result reduces within each same-family run.

  Raises:
    TokenIndexError: on non-token letters or indices outside 1..n.
  """
  _check_tokens(tw, params.n)
  letters = []
  for letter in tw:
    defining = (params.w if letter.family is words.Family.TOKEN_W
                else params.u)[letter.index - 1]
    letters.extend(defining if letter.sign > 0 else words.invert(defining))
  return words.free_reduce(letters)


def _is_trivial_run(
    run: words.Word,
    ctx_b: braid.BraidContext,
    ctx_t: thompson.ThompsonContext) -> bool:
  if run[0].family is words.Family.BRAID:
    return braid.is_trivial(ctx_b, run)
  return thompson.is_trivial(ctx_t, run)


def segment(
    word: Sequence[words.Letter],
    ctx_b: braid.BraidContext,
    ctx_t: thompson.ThompsonContext,
) -> Segmentation:
  """Splits a letter-layer word into alternating nontrivial factor segments.

  Runs trivial in their factor group are removed, after which neighbouring
  runs of the same family are merged and freely reduced; this repeats until
  nothing changes.

  Args:
    word: word over braid and Thompson letters.
    ctx_b: braid context for the braid oracle.
    ctx_t: Thompson context for the Thompson oracle.

  Returns:
    Tuple of pure words alternating between the two families; empty if the
    word reduces to the identity.

  Raises:
    SegmentationError: if token letters are present.
  """
  for letter in word:
    if letter.family in TOKEN_FAMILIES:
      raise SegmentationError(
          'expand tokens before segmenting, found {}'.format(letter))
  segments = [tuple(run) for run in words.runs(words.free_reduce(word))]
  while True:
    kept = [run for run in segments
            if run and not _is_trivial_run(run, ctx_b, ctx_t)]
    merged = []
    for run in kept:
      if merged and merged[-1] and merged[-1][0].family is run[0].family:
        merged[-1] = words.free_reduce(merged[-1] + run)
      else:
        merged.append(run)
    if merged == segments:
      return tuple(merged)
    segments = merged


def centrality_witness(params: PlatformParams) -> List[Tuple[int, int, int]]:
  """Checks that every token commutator W_i U_j W_i^-1 U_j^-1 commutes with W_l.

  Args:
    params: platform parameters.

  Returns:
    The (i, j, l) triples that verified. Any missing triple is logged.
  """
  verified = []
  indices = range(1, params.n + 1)
  for i, j, l in itertools.product(indices, repeat=3):
    w_l = (words.Letter(words.Family.TOKEN_W, l, 1),)
    commutator = commutator_tokens(i, j)
    lhs = eval_token(commutator + w_l, params.n)
    rhs = eval_token(w_l + commutator, params.n)
    if lhs == rhs:
      verified.append((i, j, l))
    else:
      logging.warning('centrality relation failed for (i, j, l) = %s',
                      (i, j, l))
  return verified


def segment_lengths(segmentation: Segmentation) -> Tuple[int, ...]:
  return tuple(len(run) for run in segmentation)
