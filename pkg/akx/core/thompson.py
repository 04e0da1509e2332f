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
"""Word problem for Thompson's group F.

F is presented by generators y_0, y_1, ... with relations
y_k y_i = y_i y_{k+1} for k > i. Words are rewritten into the unique normal
form

  y_{i_1} ... y_{i_s} y_{j_t}^-1 ... y_{j_1}^-1

with i_1 <= ... <= i_s and j_1 <= ... <= j_t, such that whenever an index i
occurs in both halves, i + 1 occurs in at least one of them.

Independently, every word is evaluated as an exact piecewise-linear
homeomorphism of [0, 1] with dyadic breakpoints. Words act by composition of
functions, right to left: the word a b is the map a o b.
"""
import bisect
import collections
import fractions
import functools
import typing
from typing import List, Sequence, Tuple

from akx.core import words

Fraction = fractions.Fraction
Breakpoint = Tuple[Fraction, Fraction]


class ThompsonWordError(ValueError):
  """Raised for letters outside the Thompson alphabet of a context."""


class ThompsonContext(typing.NamedTuple):
  """Thompson's group F with input letters capped at index p.

  Attributes:
    index_cap: largest generator index accepted on input. Rewriting may create
      indices up to index_cap + len(word).
  """

  index_cap: int

  @property
  def alphabet(self) -> words.Alphabet:
    return words.Alphabet.for_family(words.Family.THOMPSON, self.index_cap)

  def validate(self):
    if self.index_cap < 1:
      raise ValueError('index_cap must be at least 1: {}'.format(
          self.index_cap))


def check_word(ctx: ThompsonContext, word: Sequence[words.Letter]):
  """Raises ThompsonWordError unless all letters are y_0 ... y_p."""
  for letter in word:
    if letter.family is not words.Family.THOMPSON:
      raise ThompsonWordError(
          'letter {} is not a Thompson generator'.format(letter))
    if not 0 <= letter.index <= ctx.index_cap:
      raise ThompsonWordError('letter {} exceeds index cap {}'.format(
          letter, ctx.index_cap))


def _runs(indices: Sequence[int]) -> Tuple[Tuple[int, int], ...]:
  counts = collections.Counter(indices)
  return tuple(sorted(counts.items()))


class NormalForm(typing.NamedTuple):
  """Normal form of an element of F.

  Attributes:
    positive: (index, multiplicity) pairs with strictly increasing indices.
    negative: (index, multiplicity) pairs with strictly increasing indices;
      these letters are applied inverted, in decreasing index order.
  """

  positive: Tuple[Tuple[int, int], ...] = ()
  negative: Tuple[Tuple[int, int], ...] = ()

  @classmethod
  def from_indices(
      cls, positive: Sequence[int], negative: Sequence[int]) -> 'NormalForm':
    return cls(_runs(positive), _runs(negative))

  def is_identity(self) -> bool:
    return not self.positive and not self.negative

  def to_word(self) -> words.Word:
    y = words.Family.THOMPSON
    letters = []
    for index, count in self.positive:
      letters.extend([words.Letter(y, index, 1)] * count)
    for index, count in reversed(self.negative):
      letters.extend([words.Letter(y, index, -1)] * count)
    return tuple(letters)


def satisfies_uniqueness(nf: NormalForm) -> bool:
  """Checks the uniqueness condition of the normal form."""
  positive = {index for index, _ in nf.positive}
  negative = {index for index, _ in nf.negative}
  support = positive | negative
  return all(i + 1 in support for i in positive & negative)


def _seminormal(word: Sequence[words.Letter]) -> Tuple[List[int], List[int]]:
  """Collects positive letters left and negative letters right.

  Args:
    word: Thompson word.

  Returns:
    (positive, negative) where positive is nondecreasing and negative lists
    the inverted letters left to right, hence nonincreasing.
  """
  positive = []
  negative = []
  for letter in word:
    k = letter.index
    if letter.sign < 0:
      # y_i^-1 y_k^-1 = y_{k+1}^-1 y_i^-1 for k > i.
      position = len(negative)
      while position > 0 and k > negative[position - 1]:
        k += 1
        position -= 1
      negative.insert(position, k)
      continue
    consumed = False
    for position in range(len(negative) - 1, -1, -1):
      b = negative[position]
      if k > b:
        # y_b^-1 y_k = y_{k+1} y_b^-1
        k += 1
      elif k == b:
        del negative[position]
        consumed = True
        break
      else:
        # y_b^-1 y_k = y_k y_{b+1}^-1
        negative[position] = b + 1
    if consumed:
      continue
    # y_p y_k = y_k y_{p+1} for p > k.
    position = bisect.bisect_right(positive, k)
    positive[position:] = [p + 1 for p in positive[position:]]
    positive.insert(position, k)
  return positive, negative


def seminormal_form(
    ctx: ThompsonContext, word: Sequence[words.Letter]) -> NormalForm:
  """First rewriting phase: sorted halves, uniqueness not yet enforced."""
  check_word(ctx, word)
  positive, negative = _seminormal(word)
  return NormalForm.from_indices(positive, negative)


def _contract(positive: List[int], negative: List[int]):
  """Applies y_i v y_i^-1 -> v shifted down until uniqueness holds.

  Letters between the last y_i of the positive half and the matching y_i^-1
  all have indices >= i + 2 when i + 1 is absent, and conjugating by y_i
  lowers each of them by one.
  """
  while True:
    support = set(positive) | set(negative)
    candidates = [i for i in set(positive) & set(negative)
                  if i + 1 not in support]
    if not candidates:
      return
    i = max(candidates)
    positive.remove(i)
    negative.remove(i)
    positive[:] = [p - 1 if p > i else p for p in positive]
    negative[:] = [b - 1 if b > i else b for b in negative]


def normal_form(
    ctx: ThompsonContext, word: Sequence[words.Letter]) -> NormalForm:
  """Unique normal form of a word.

  Args:
    ctx: Thompson context.
    word: Thompson word with indices at most ctx.index_cap.

  Returns:
    NormalForm satisfying the uniqueness condition.

  Raises:
    ThompsonWordError: on foreign letters or indices above the cap.
  """
  check_word(ctx, word)
  positive, negative = _seminormal(word)
  _contract(positive, negative)
  return NormalForm.from_indices(positive, negative)


def is_trivial(ctx: ThompsonContext, word: Sequence[words.Letter]) -> bool:
  return normal_form(ctx, word).is_identity()


def equal(
    ctx: ThompsonContext,
    a: Sequence[words.Letter],
    b: Sequence[words.Letter]) -> bool:
  return normal_form(ctx, a) == normal_form(ctx, b)


def relators(count: int) -> List[words.Word]:
  """Relators y_k y_i y_{k+1}^-1 y_i^-1 for 0 <= i < k < count."""
  y = words.Family.THOMPSON
  result = []
  for k in range(count):
    for i in range(k):
      result.append((words.Letter(y, k, 1), words.Letter(y, i, 1),
                     words.Letter(y, k + 1, -1), words.Letter(y, i, -1)))
  return result


def finite_presentation_relators() -> List[words.Word]:
  """Relators of the finite presentation on y_0 ... y_4 (k > i, k < 4)."""
  return relators(4)


def _is_power_of_two(value: Fraction) -> bool:
  num, den = value.numerator, value.denominator
  return num > 0 and num & (num - 1) == 0 and den & (den - 1) == 0


class PLMap(typing.NamedTuple):
  """Piecewise-linear homeomorphism of [0, 1] with exact breakpoints.

  The map is linear between consecutive breakpoints. Redundant breakpoints
  (equal slopes on both sides) are always removed, so two maps are equal iff
  their breakpoints are equal.

  Attributes:
    breakpoints: (input, output) pairs, strictly increasing in both
      coordinates, starting at (0, 0) and ending at (1, 1).
  """

  breakpoints: Tuple[Breakpoint, ...]

  @classmethod
  def identity(cls) -> 'PLMap':
    return cls(((Fraction(0), Fraction(0)), (Fraction(1), Fraction(1))))

  @classmethod
  def from_points(cls, points: Sequence[Tuple[object, object]]) -> 'PLMap':
    """Builds a simplified map from (input, output) pairs of rationals."""
    pairs = [(Fraction(x), Fraction(y)) for x, y in points]
    return cls(_simplify(pairs))

  def slopes(self) -> List[Fraction]:
    return [(y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1)
            in zip(self.breakpoints, self.breakpoints[1:])]

  def validate(self):
    """Checks the homeomorphism and dyadic slope invariants.

    Raises:
      ValueError: if any invariant fails.
    """
    points = self.breakpoints
    if points[0] != (0, 0) or points[-1] != (1, 1):
      raise ValueError('map must fix 0 and 1: {}'.format(points))
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
      if not (x0 < x1 and y0 < y1):
        raise ValueError('breakpoints not increasing: {}'.format(points))
    for slope in self.slopes():
      if not _is_power_of_two(slope):
        raise ValueError('slope {} is not a power of two'.format(slope))

  def evaluate(self, t: Fraction) -> Fraction:
    xs = [x for x, _ in self.breakpoints]
    position = min(max(bisect.bisect_right(xs, t), 1), len(xs) - 1)
    (x0, y0), (x1, y1) = self.breakpoints[position - 1:position + 1]
    return y0 + (t - x0) * (y1 - y0) / (x1 - x0)

  def inverse(self) -> 'PLMap':
    return PLMap(tuple((y, x) for x, y in self.breakpoints))

  def compose(self, other: 'PLMap') -> 'PLMap':
    """Returns self o other, i.e., apply `other` first."""
    inverse = other.inverse()
    xs = {x for x, _ in other.breakpoints}
    xs.update(inverse.evaluate(x) for x, _ in self.breakpoints)
    points = [(x, self.evaluate(other.evaluate(x))) for x in sorted(xs)]
    return PLMap(_simplify(points))

  def is_identity(self) -> bool:
    return self == PLMap.identity()


def _simplify(points: List[Breakpoint]) -> Tuple[Breakpoint, ...]:
  result = [points[0]]
  for point in points[1:]:
    if len(result) >= 2:
      (x0, y0), (x1, y1) = result[-2], result[-1]
      x2, y2 = point
      if (y1 - y0) * (x2 - x1) == (y2 - y1) * (x1 - x0):
        result[-1] = point
        continue
    result.append(point)
  return tuple(result)


_Y0 = PLMap.from_points(
    [(0, 0), (Fraction(1, 2), Fraction(1, 4)),
     (Fraction(3, 4), Fraction(1, 2)), (1, 1)])
_Y1 = PLMap.from_points(
    [(0, 0), (Fraction(1, 2), Fraction(1, 2)),
     (Fraction(3, 4), Fraction(5, 8)), (Fraction(7, 8), Fraction(3, 4)),
     (1, 1)])


@functools.lru_cache(maxsize=None)
def generator_map(index: int) -> PLMap:
  """PL map of y_index; y_{k+1} = y_0^-1 o y_k o y_0 for k >= 1."""
  if index < 0:
    raise ValueError('negative generator index: {}'.format(index))
  if index == 0:
    return _Y0
  if index == 1:
    return _Y1
  return _Y0.inverse().compose(generator_map(index - 1)).compose(_Y0)


def pl_map(ctx: ThompsonContext, word: Sequence[words.Letter]) -> PLMap:
  """Exact PL homeomorphism of a word, letters composed right to left."""
  check_word(ctx, word)
  result = PLMap.identity()
  for letter in word:
    g = generator_map(letter.index)
    result = result.compose(g if letter.sign > 0 else g.inverse())
  return result
