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
"""Free words over signed generator letters.

Every other module rewrites words built from these letters. A Word is a plain
tuple of Letter values, so words are immutable and hashable.

Example usage:
  word = parse_word('x1 x2^-1')
  assert free_reduce(concat(word, invert(word))) == ()
"""
import enum
import re
import typing
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np


class Family(enum.Enum):
  """Generator families; the value is the textual prefix."""
  BRAID = 'x'
  THOMPSON = 'y'
  TOKEN_W = 'W'
  TOKEN_U = 'U'


MIN_INDEX = {
    Family.BRAID: 1,
    Family.THOMPSON: 0,
    Family.TOKEN_W: 1,
    Family.TOKEN_U: 1,
}


class WordSyntaxError(ValueError):
  """Raised when a textual word cannot be parsed."""


class Letter(typing.NamedTuple):
  """A generator raised to the power +1 or -1.

  Attributes:
    family: generator family of this letter.
    index: generator index, e.g., 3 for x3.
    sign: +1 or -1.
  """

  family: Family
  index: int
  sign: int

  def inverse(self) -> 'Letter':
    return self._replace(sign=-self.sign)

  def __str__(self) -> str:
    text = '{}{}'.format(self.family.value, self.index)
    return text if self.sign > 0 else text + '^-1'


Word = Tuple[Letter, ...]


class Alphabet(typing.NamedTuple):
  """Range of generator indices available to a word.

  Attributes:
    family: generator family.
    min_index: smallest allowed index.
    max_index: largest allowed index (inclusive). None means unbounded, which
      is only meaningful for the Thompson family.
  """

  family: Family
  min_index: int
  max_index: Optional[int]

  @classmethod
  def for_family(cls, family: Family, max_index: Optional[int]) -> 'Alphabet':
    return cls(family, MIN_INDEX[family], max_index)

  def validate(self):
    """Checks the alphabet invariants.

    Raises:
      ValueError: if min_index does not match the family or the range is
        reversed.
    """
    if self.min_index != MIN_INDEX[self.family]:
      raise ValueError('{} alphabet must start at index {}, got {}'.format(
          self.family.name, MIN_INDEX[self.family], self.min_index))
    if self.max_index is None:
      if self.family is not Family.THOMPSON:
        raise ValueError('only the Thompson alphabet may be unbounded')
    elif self.max_index < self.min_index:
      raise ValueError('empty alphabet: max_index {} < min_index {}'.format(
          self.max_index, self.min_index))

  def bounded(self, cap: int) -> 'Alphabet':
    """Returns this alphabet with an unbounded maximum replaced by cap."""
    if self.max_index is not None:
      return self
    return self._replace(max_index=cap)

  def contains(self, letter: Letter) -> bool:
    if letter.family is not self.family or letter.index < self.min_index:
      return False
    return self.max_index is None or letter.index <= self.max_index

  def letters(self) -> List[Letter]:
    """All signed symbols ordered by index, positive sign first."""
    if self.max_index is None:
      raise ValueError('cannot enumerate an unbounded alphabet')
    return [Letter(self.family, index, sign)
            for index in range(self.min_index, self.max_index + 1)
            for sign in (1, -1)]


def invert(word: Sequence[Letter]) -> Word:
  """Returns the formal inverse: letters reversed with signs flipped."""
  return tuple(letter.inverse() for letter in reversed(word))


def concat(a: Sequence[Letter], b: Sequence[Letter]) -> Word:
  """Concatenates two words without any reduction."""
  return tuple(a) + tuple(b)


def free_reduce(word: Iterable[Letter]) -> Word:
  """Deletes adjacent letter/inverse pairs until none remain.

  A single left-to-right stack pass suffices because free reduction is
  confluent.

  Args:
    word: letters to reduce.

  Returns:
    The freely reduced word.
  """
  stack = []
  for letter in word:
    if (stack and stack[-1].family is letter.family
        and stack[-1].index == letter.index
        and stack[-1].sign == -letter.sign):
      stack.pop()
    else:
      stack.append(letter)
  return tuple(stack)


def is_reduced(word: Sequence[Letter]) -> bool:
  return all(a != b.inverse() for a, b in zip(word, word[1:]))


def random_word(
    alphabet: Alphabet,
    length: int,
    rng: np.random.RandomState,
) -> Word:
  """Samples a freely reduced word of exactly the requested length.

  Each letter is drawn uniformly from the signed symbols that do not cancel the
  previous letter, so the result never needs post-reduction.

  Args:
    alphabet: bounded alphabet to draw from.
    length: number of letters.
    rng: source of randomness.

  Returns:
    Reduced word with `length` letters.

  Raises:
    ValueError: if length is negative or the alphabet is empty or unbounded.
  """
  if length < 0:
    raise ValueError('length must be non-negative: {}'.format(length))
  alphabet.validate()
  symbols = alphabet.letters()
  word = []
  for _ in range(length):
    if word:
      forbidden = word[-1].inverse()
      choices = [letter for letter in symbols if letter != forbidden]
    else:
      choices = symbols
    word.append(choices[rng.randint(len(choices))])
  return tuple(word)


def exponent_sum(word: Iterable[Letter], index: int) -> int:
  """Sum of the signs of all letters with the given index."""
  return sum(letter.sign for letter in word if letter.index == index)


def families(word: Iterable[Letter]) -> List[Family]:
  """Distinct families present in the word, in order of first appearance."""
  seen = []
  for letter in word:
    if letter.family not in seen:
      seen.append(letter.family)
  return seen


def is_pure(word: Sequence[Letter]) -> bool:
  return len(families(word)) <= 1


def runs(word: Sequence[Letter]) -> Iterator[Word]:
  """Splits a word into maximal runs of letters from a single family."""
  start = 0
  for position in range(1, len(word) + 1):
    if position == len(word) or word[position].family is not word[start].family:
      yield tuple(word[start:position])
      start = position


_LETTER_PATTERN = re.compile(r'^([xyWU])(\d+)(?:\^(-?\d+))?$')
_FAMILY_BY_PREFIX = {family.value: family for family in Family}


def parse_word(text: str) -> Word:
  """Parses whitespace separated letters such as 'x3 x3^-1 y0 W2 U1^-1'.

  Integer powers like 'x1^3' expand to repeated letters. The empty word may be
  written as 'e' or as an empty string.

  Args:
    text: textual word.

  Returns:
    Parsed word, not reduced.

  Raises:
    WordSyntaxError: if a token is not a valid letter.
  """
  tokens = text.split()
  if tokens == ['e']:
    return ()
  letters = []
  for token in tokens:
    match = _LETTER_PATTERN.match(token)
    if match is None:
      raise WordSyntaxError('invalid letter {!r} in word {!r}'.format(
          token, text))
    prefix, index, power = match.groups()
    power = 1 if power is None else int(power)
    if power == 0:
      raise WordSyntaxError('zero power in letter {!r}'.format(token))
    sign = 1 if power > 0 else -1
    letters.extend([Letter(_FAMILY_BY_PREFIX[prefix], int(index), sign)]
                   * abs(power))
  return tuple(letters)


def format_word(word: Sequence[Letter]) -> str:
  """Inverse of parse_word for words of single letters; '' prints as 'e'."""
  if not word:
    return 'e'
  return ' '.join(str(letter) for letter in word)
