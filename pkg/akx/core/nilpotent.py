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
"""Free nilpotent group of class 2 on generators h_1 ... h_n.

Every element has a unique collected form

  h_1^a_1 ... h_n^a_n  prod_{i < j} c_ij^m_ij,    c_ij = [h_i, h_j],

with commutator convention [x, y] = x^-1 y^-1 x y. The commutators c_ij are
central. Exponents are Python integers, so no arithmetic overflows.

Commutator exponents are stored flat, ordered lexicographically by (i, j).
Indices in this module are 1-based to match the generator names.
"""
import itertools
import typing
from typing import Iterable, List, Tuple

import numpy as np


class RankMismatchError(ValueError):
  """Raised when combining elements of different rank."""


def pairs(rank: int) -> List[Tuple[int, int]]:
  """Index pairs (i, j), 1 <= i < j <= rank, in storage order."""
  return list(itertools.combinations(range(1, rank + 1), 2))


def _pair_offset(rank: int, i: int, j: int) -> int:
  # number of pairs (i', j') with i' < i, plus position of j after i.
  return (i - 1) * rank - (i - 1) * i // 2 + (j - i - 1)


class NilElement(typing.NamedTuple):
  """Element of the free class-2 nilpotent group N_rank.

  Attributes:
    rank: number of generators n.
    a: generator exponents, length n.
    m: commutator exponents, length n (n - 1) / 2, in `pairs(rank)` order.
  """

  rank: int
  a: Tuple[int, ...]
  m: Tuple[int, ...]

  def commutator_exponent(self, i: int, j: int) -> int:
    """Exponent of c_ij for 1 <= i < j <= rank."""
    return self.m[_pair_offset(self.rank, i, j)]

  def is_identity(self) -> bool:
    return not any(self.a) and not any(self.m)


def identity(rank: int) -> NilElement:
  if rank < 1:
    raise ValueError('rank must be positive: {}'.format(rank))
  return NilElement(rank, (0,) * rank, (0,) * (rank * (rank - 1) // 2))


def generator(rank: int, i: int) -> NilElement:
  """The generator h_i."""
  if not 1 <= i <= rank:
    raise ValueError('generator index {} out of range 1..{}'.format(i, rank))
  a = [0] * rank
  a[i - 1] = 1
  return NilElement(rank, tuple(a), (0,) * (rank * (rank - 1) // 2))


def _check_ranks(g: NilElement, h: NilElement):
  if g.rank != h.rank:
    raise RankMismatchError('rank mismatch: {} vs {}'.format(g.rank, h.rank))


def mul(g: NilElement, h: NilElement) -> NilElement:
  """Product g h, collected.

  Moving h_i^{b_i} left past h_j^{a_j} (i < j) leaves c_ij^{-b_i a_j} behind,
  so m''_ij = m_ij + m'_ij - b_i a_j.

  Raises:
    RankMismatchError: if ranks differ.
  """
  _check_ranks(g, h)
  a = tuple(x + y for x, y in zip(g.a, h.a))
  m = tuple(g.m[k] + h.m[k] - h.a[i - 1] * g.a[j - 1]
            for k, (i, j) in enumerate(pairs(g.rank)))
  return NilElement(g.rank, a, m)


def inv(g: NilElement) -> NilElement:
  a = tuple(-x for x in g.a)
  m = tuple(-g.m[k] - g.a[i - 1] * g.a[j - 1]
            for k, (i, j) in enumerate(pairs(g.rank)))
  return NilElement(g.rank, a, m)


def commutator(g: NilElement, h: NilElement) -> NilElement:
  """[g, h] = g^-1 h^-1 g h; always central."""
  _check_ranks(g, h)
  m = tuple(g.a[i - 1] * h.a[j - 1] - h.a[i - 1] * g.a[j - 1]
            for i, j in pairs(g.rank))
  return NilElement(g.rank, (0,) * g.rank, m)


def conj(g: NilElement, c: NilElement) -> NilElement:
  """c^-1 g c, which equals g [g, c]."""
  _check_ranks(g, c)
  m = tuple(g.m[k] + g.a[i - 1] * c.a[j - 1] - c.a[i - 1] * g.a[j - 1]
            for k, (i, j) in enumerate(pairs(g.rank)))
  return NilElement(g.rank, g.a, m)


def is_central(g: NilElement) -> bool:
  return not any(g.a)


def collect(rank: int, powers: Iterable[Tuple[int, int]]) -> NilElement:
  """Collects a product of generators h_i^s given as (i, s) with s = +-1.

  Equivalent to folding `mul` over generators but costs O(rank) per letter:
  appending h_k^s to an element with exponents a adds -s a_j to m_kj for every
  j > k.

  Args:
    rank: number of generators.
    powers: (generator index, sign) pairs, left to right.

  Returns:
    The collected product.
  """
  a = [0] * rank
  m = [0] * (rank * (rank - 1) // 2)
  for k, s in powers:
    if not 1 <= k <= rank:
      raise ValueError('generator index {} out of range 1..{}'.format(k, rank))
    base = _pair_offset(rank, k, k + 1) if k < rank else 0
    for j in range(k + 1, rank + 1):
      m[base + j - k - 1] -= s * a[j - 1]
    a[k - 1] += s
  return NilElement(rank, tuple(a), tuple(m))


def random_element(
    rank: int, rng: np.random.RandomState, bound: int = 100) -> NilElement:
  """Element with all exponents drawn uniformly from [-bound, bound]."""
  a = rng.randint(-bound, bound + 1, size=rank)
  m = rng.randint(-bound, bound + 1, size=rank * (rank - 1) // 2)
  return NilElement(rank, tuple(int(x) for x in a), tuple(int(x) for x in m))


def heisenberg_project(g: NilElement, i: int, j: int) -> Tuple[int, int, int]:
  """Image (a_i, a_j, m_ij) in the integer Heisenberg group.

  Killing every generator except h_i and h_j maps N_n onto the rank-2 group,
  which is the integer Heisenberg group.

  Raises:
    ValueError: unless 1 <= i < j <= rank.
  """
  if not 1 <= i < j <= g.rank:
    raise ValueError('invalid projection indices ({}, {}) for rank {}'.format(
        i, j, g.rank))
  return g.a[i - 1], g.a[j - 1], g.commutator_exponent(i, j)


def heisenberg_matrix(triple: Tuple[int, int, int]) -> np.ndarray:
  """Unitriangular matrix of h_i^x h_j^y c^z with h_i -> E12, h_j -> E23."""
  x, y, z = triple
  return np.array([[1, x, x * y + z], [0, 1, y], [0, 0, 1]], dtype=object)


def heisenberg_triple(matrix: np.ndarray) -> Tuple[int, int, int]:
  x, y = int(matrix[0, 1]), int(matrix[1, 2])
  return x, y, int(matrix[0, 2]) - x * y


def canonical_bytes(g: NilElement) -> bytes:
  """Injective ASCII encoding 'N:n,a_1,...,a_n,m_12,...'."""
  fields = [g.rank] + list(g.a) + list(g.m)
  return ('N:' + ','.join(str(int(v)) for v in fields)).encode('ascii')


def from_canonical_bytes(data: bytes) -> NilElement:
  """Parses the output of canonical_bytes.

  Raises:
    ValueError: if the data is not a canonical encoding.
  """
  text = data.decode('ascii')
  if not text.startswith('N:'):
    raise ValueError('missing N: prefix in {!r}'.format(text))
  fields = [int(v) for v in text[2:].split(',')]
  rank = fields[0]
  size = rank * (rank - 1) // 2
  if rank < 1 or len(fields) != 1 + rank + size:
    raise ValueError('wrong field count in {!r}'.format(text))
  return NilElement(rank, tuple(fields[1:1 + rank]), tuple(fields[1 + rank:]))
