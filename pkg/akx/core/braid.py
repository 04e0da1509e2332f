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
"""Word problem for braid groups on finitely many strands.

Triviality is decided with Dehornoy's handle reduction. Internally words are
lists of signed integers (+i for x_i, -i for x_i^-1), which keeps the inner
loop free of NamedTuple allocations.

The infinite braid group is the direct limit of the B_m; including B_m in a
wider B_m' is the identity on letters, so a context only needs the width.
"""
import typing
from typing import List, Optional, Sequence, Tuple

from absl import logging
from akx.core import words

DEFAULT_MAX_REDUCTION_STEPS = 10**6


class BraidWordError(ValueError):
  """Raised for letters outside the braid alphabet of a context."""


class ReductionGuardError(RuntimeError):
  """Raised when handle reduction exceeds its step guard."""


class BraidContext(typing.NamedTuple):
  """Braid group B_m on `strands` strands.

  Attributes:
    strands: number of strands m; generators are x_1 ... x_{m-1}.
    max_reduction_steps: guard on the number of handle reductions.
  """

  strands: int
  max_reduction_steps: int = DEFAULT_MAX_REDUCTION_STEPS

  @property
  def alphabet(self) -> words.Alphabet:
    return words.Alphabet.for_family(words.Family.BRAID, self.strands - 1)

  def validate(self):
    if self.strands < 2:
      raise ValueError('need at least 2 strands: {}'.format(self.strands))
    if self.max_reduction_steps < 1:
      raise ValueError('max_reduction_steps must be positive: {}'.format(
          self.max_reduction_steps))

  def embed(self, strands: int) -> 'BraidContext':
    """Context for a wider braid group containing this one."""
    if strands < self.strands:
      raise ValueError('cannot embed B_{} into B_{}'.format(
          self.strands, strands))
    return self._replace(strands=strands)


class Permutation(typing.NamedTuple):
  """Permutation of {1..m}, stored as the images of 1..m."""

  images: Tuple[int, ...]

  @classmethod
  def identity(cls, size: int) -> 'Permutation':
    return cls(tuple(range(1, size + 1)))

  def is_identity(self) -> bool:
    return all(image == i + 1 for i, image in enumerate(self.images))


def check_word(ctx: BraidContext, word: Sequence[words.Letter]):
  """Checks that every letter is a braid generator of B_m.

  Raises:
    BraidWordError: on a letter of another family or an index outside
      1..m-1.
  """
  for letter in word:
    if letter.family is not words.Family.BRAID:
      raise BraidWordError('letter {} is not a braid generator'.format(letter))
    if not 1 <= letter.index <= ctx.strands - 1:
      raise BraidWordError('letter {} out of range for {} strands'.format(
          letter, ctx.strands))


def _to_ints(word: Sequence[words.Letter]) -> List[int]:
  return [letter.sign * letter.index for letter in word]


def _from_ints(code: Sequence[int]) -> words.Word:
  return tuple(words.Letter(words.Family.BRAID, abs(c), 1 if c > 0 else -1)
               for c in code)


def _free_reduce_ints(code: Sequence[int]) -> List[int]:
  stack = []
  for c in code:
    if stack and stack[-1] == -c:
      stack.pop()
    else:
      stack.append(c)
  return stack


def perm_projection(
    ctx: BraidContext, word: Sequence[words.Letter]) -> Permutation:
  """Image of the word in the symmetric group, x_i -> (i i+1).

  Transpositions are applied in letter order to the positions of the strands;
  signs are irrelevant.
  """
  check_word(ctx, word)
  images = list(range(1, ctx.strands + 1))
  for letter in word:
    i = letter.index - 1
    images[i], images[i + 1] = images[i + 1], images[i]
  return Permutation(tuple(images))


def writhe(word: Sequence[words.Letter]) -> int:
  """Total exponent sum, the abelianization B_m -> Z."""
  return sum(letter.sign for letter in word)


def _find_handle(code: Sequence[int]) -> Optional[Tuple[int, int]]:
  """Finds the handle with the leftmost right end.

  A handle x_i^e v x_i^-e has no letter of index <= i inside v. Handles are
  nested or disjoint, so the handle closing first contains no other handle.

  Args:
    code: signed integer word.

  Returns:
    (start, end) positions of the flanking letters, or None.
  """
  # last_seen[i] is the last position holding a letter of index i.
  last_seen = {}
  for end, c in enumerate(code):
    i = abs(c)
    start = last_seen.get(i)
    if start is not None and code[start] == -c:
      if all(last_seen.get(j, -1) < start for j in range(1, i)):
        return start, end
    last_seen[i] = end
  return None


def find_handle(
    ctx: BraidContext,
    word: Sequence[words.Letter]) -> Optional[Tuple[int, int]]:
  """Positions of the first-closing handle in the word, or None."""
  check_word(ctx, word)
  return _find_handle(_to_ints(word))


def _reduce_handle(code: List[int], start: int, end: int) -> List[int]:
  i = abs(code[start])
  e = 1 if code[start] > 0 else -1
  middle = []
  for c in code[start + 1:end]:
    if abs(c) == i + 1:
      d = 1 if c > 0 else -1
      middle.extend([-e * (i + 1), d * i, e * (i + 1)])
    else:
      middle.append(c)
  return code[:start] + middle + code[end + 1:]


def handle_reduce(
    ctx: BraidContext, word: Sequence[words.Letter]) -> words.Word:
  """Reduces all handles, returning an equivalent handle-free word.

  Args:
    ctx: braid group context.
    word: braid word.

  Returns:
    A freely reduced word containing no handle and equal to `word` in B_m. It
    is empty exactly when `word` is trivial.

  Raises:
    BraidWordError: if the word is not over the braid alphabet of ctx.
    ReductionGuardError: if more than ctx.max_reduction_steps reductions are
      needed.
  """
  check_word(ctx, word)
  code = _free_reduce_ints(_to_ints(word))
  steps = 0
  while True:
    handle = _find_handle(code)
    if handle is None:
      break
    steps += 1
    if steps > ctx.max_reduction_steps:
      logging.warning('handle reduction guard tripped after %d steps on a '
                      'word of length %d', ctx.max_reduction_steps, len(word))
      raise ReductionGuardError(
          'handle reduction exceeded {} steps'.format(ctx.max_reduction_steps))
    code = _free_reduce_ints(_reduce_handle(code, *handle))
  logging.debug('handle reduction: %d letters -> %d in %d steps',
                len(word), len(code), steps)
  return _from_ints(code)


def is_trivial(ctx: BraidContext, word: Sequence[words.Letter]) -> bool:
  return not handle_reduce(ctx, word)


def equal(
    ctx: BraidContext,
    a: Sequence[words.Letter],
    b: Sequence[words.Letter]) -> bool:
  check_word(ctx, b)
  return is_trivial(ctx, words.concat(a, words.invert(b)))


def relators(ctx: BraidContext) -> List[words.Word]:
  """Defining relators of B_m as words equal to the identity.

  Far commutation x_i x_j x_i^-1 x_j^-1 for |i - j| >= 2, and the braid
  relation x_i x_{i+1} x_i x_{i+1}^-1 x_i^-1 x_{i+1}^-1.
  """
  n = ctx.strands - 1
  codes = []
  for i in range(1, n + 1):
    for j in range(i + 2, n + 1):
      codes.append([i, j, -i, -j])
  for i in range(1, n):
    codes.append([i, i + 1, i, -(i + 1), -i, -(i + 1)])
  return [_from_ints(code) for code in codes]
