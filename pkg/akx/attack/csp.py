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
"""Conjugacy search attacks on recorded handshake messages.

An eavesdropper who sees M1 = (A^-1 U_i A)_i wants some token word C over the
W family with C^-1 U_i C = A^-1 U_i A for every i; any such C reproduces the
sender's side of the key. Attacks run at the token layer and compare elements
in the free class-2 nilpotent model, which can only make them easier than
attacking letter-layer words.
"""
import enum
import time
import typing
from typing import Any, Callable, Dict, Iterator, Optional, Sequence, Tuple

from absl import logging
import numpy as np
from akx.core import amalgam
from akx.core import nilpotent
from akx.core import words
from akx.protocol import wire

NilElement = nilpotent.NilElement


class Method(enum.Enum):
  BRUTE_FORCE = 'brute'
  LENGTH_BASED = 'length'


class AttackReport(typing.NamedTuple):
  """Outcome of one attack run.

  Attributes:
    method: attack used.
    found: conjugator reproducing the victim's tuple, or None.
    equivalent_to_secret: whether `found` was re-verified to reproduce the
      message tuple.
    nodes_explored: candidate conjugators evaluated.
    wall_time: seconds spent.
    budget: cap on nodes_explored, if any.
  """

  method: Method
  found: Optional[words.Word]
  equivalent_to_secret: bool
  nodes_explored: int
  wall_time: float
  budget: Optional[int]

  def to_config(self) -> Dict[str, Any]:
    """Create a JSON-compatible dict representing this report."""
    return dict(
        method=self.method.value,
        found=None if self.found is None else words.format_word(self.found),
        equivalent_to_secret=self.equivalent_to_secret,
        nodes_explored=self.nodes_explored,
        wall_time=self.wall_time,
        budget=self.budget,
    )


class _Target(typing.NamedTuple):
  family: words.Family  # family of the conjugator being searched for
  generators: Tuple[NilElement, ...]  # h_i
  targets: Tuple[NilElement, ...]  # evaluated message words


def _target(params: amalgam.PlatformParams, msg: wire.Message) -> _Target:
  if msg.msg_type == wire.MessageType.M1:
    family = words.Family.TOKEN_W
  elif msg.msg_type == wire.MessageType.M2:
    family = words.Family.TOKEN_U
  else:
    raise ValueError('unknown message type {}'.format(msg.msg_type))
  if len(msg.payload) != params.n:
    raise ValueError('expected {} token words, got {}'.format(
        params.n, len(msg.payload)))
  generators = tuple(nilpotent.generator(params.n, i)
                     for i in range(1, params.n + 1))
  targets = tuple(amalgam.eval_token(word, params.n) for word in msg.payload)
  return _Target(family, generators, targets)


def _letter_element(letter: words.Letter, n: int) -> NilElement:
  return nilpotent.collect(n, [(letter.index, letter.sign)])


def _matches(target: _Target, conjugator: NilElement) -> bool:
  return all(nilpotent.conj(g, conjugator) == t
             for g, t in zip(target.generators, target.targets))


def _magnitude(g: NilElement) -> int:
  return sum(abs(x) for x in g.a) + sum(abs(x) for x in g.m)


def _distance(target: _Target, conjugator: NilElement) -> int:
  return sum(
      _magnitude(nilpotent.mul(nilpotent.conj(g, conjugator),
                               nilpotent.inv(t)))
      for g, t in zip(target.generators, target.targets))


def distance(
    params: amalgam.PlatformParams,
    msg: wire.Message,
    conjugator: Sequence[words.Letter],
) -> int:
  """Total exponent magnitude separating C^-1 G_i C from the message tuple."""
  return _distance(_target(params, msg),
                   amalgam.eval_token(conjugator, params.n))


def reproduces(
    params: amalgam.PlatformParams,
    msg: wire.Message,
    conjugator: Sequence[words.Letter],
) -> bool:
  """Whether eval(C^-1 G_i C) equals eval(msg_i) for every i."""
  target = _target(params, msg)
  generator_family = (words.Family.TOKEN_U if target.family
                      is words.Family.TOKEN_W else words.Family.TOKEN_W)
  for i, t in enumerate(target.targets, start=1):
    word = (words.invert(conjugator)
            + (amalgam.token_generator(generator_family, i),)
            + tuple(conjugator))
    if amalgam.eval_token(word, params.n) != t:
      return False
  return True


def _reduced_words(
    letters: Sequence[words.Letter],
    length: int,
    prefix: Tuple[words.Letter, ...] = (),
) -> Iterator[Tuple[words.Letter, ...]]:
  """Reduced words of the given length, lexicographic in `letters` order."""
  if length == 0:
    yield prefix
    return
  for letter in letters:
    if prefix and letter == prefix[-1].inverse():
      continue
    yield from _reduced_words(letters, length - 1, prefix + (letter,))


def brute_force_csp(
    params: amalgam.PlatformParams,
    msg: wire.Message,
    max_len: int,
    budget: Optional[int] = None,
) -> AttackReport:
  """Exhaustive conjugacy search over token words up to max_len.

  Candidates are tried by length, then lexicographically by (index, sign)
  with the positive sign first.

  Args:
    params: platform parameters.
    msg: victim's M1 (searches W words) or M2 (searches U words).
    max_len: longest candidate length.
    budget: optional cap on candidates tried.

  Returns:
    AttackReport with the first reproducing conjugator, if any.
  """
  start = time.monotonic()
  target = _target(params, msg)
  letters = words.Alphabet.for_family(target.family, params.n).letters()
  nodes = 0
  found = None
  for length in range(max_len + 1):
    for candidate in _reduced_words(letters, length):
      if budget is not None and nodes >= budget:
        break
      nodes += 1
      if _matches(target, amalgam.eval_token(candidate, params.n)):
        found = candidate
        break
    if found is not None or (budget is not None and nodes >= budget):
      break
  equivalent = found is not None and reproduces(params, msg, found)
  logging.info('brute force: %s after %d candidates',
               'found' if found is not None else 'nothing', nodes)
  return AttackReport(Method.BRUTE_FORCE, found, equivalent, nodes,
                      time.monotonic() - start, budget)


def length_based_attack(
    params: amalgam.PlatformParams,
    msg: wire.Message,
    budget: int,
) -> AttackReport:
  """Greedy descent on the distance to the message tuple.

  Starting from the empty conjugator, every reduced one-letter extension is
  scored and the best strictly improving one is kept; ties go to the lowest
  index, then the positive sign. The search stops on success, at a local
  minimum, or when `budget` candidates have been scored.

  Args:
    params: platform parameters.
    msg: victim's message.
    budget: maximum number of scored candidates.

  Returns:
    AttackReport; `found` is set only when the distance reached zero.
  """
  start = time.monotonic()
  target = _target(params, msg)
  letters = words.Alphabet.for_family(target.family, params.n).letters()
  elements = {letter: _letter_element(letter, params.n) for letter in letters}
  conjugator = ()
  element = nilpotent.identity(params.n)
  nodes = 0
  best = None
  if budget > 0:
    best = _distance(target, element)
    nodes = 1
  while best is not None and best > 0 and nodes < budget:
    step = None
    for letter in letters:
      if conjugator and letter == conjugator[-1].inverse():
        continue
      if nodes >= budget:
        break
      candidate = nilpotent.mul(element, elements[letter])
      nodes += 1
      score = _distance(target, candidate)
      if score < best and (step is None or score < step[0]):
        step = (score, letter, candidate)
    if step is None:
      logging.debug('length-based attack: local minimum %d at length %d',
                    best, len(conjugator))
      break
    best, letter, element = step
    conjugator += (letter,)
  found = conjugator if best == 0 else None
  equivalent = found is not None and reproduces(params, msg, found)
  logging.info('length-based attack: distance %s after %d candidates',
               best, nodes)
  return AttackReport(Method.LENGTH_BASED, found, equivalent, nodes,
                      time.monotonic() - start, budget)


def verify_nonuniqueness(
    params: amalgam.PlatformParams,
    msg: wire.Message,
    conjugator: Sequence[words.Letter],
) -> bool:
  """Checks that C [W_i, U_j] also reproduces the tuple for every i, j.

  Commutators are central, so multiplying a conjugator by one never changes
  the conjugates it produces.
  """
  for i in range(1, params.n + 1):
    for j in range(1, params.n + 1):
      extended = tuple(conjugator) + amalgam.commutator_tokens(i, j)
      if not reproduces(params, msg, extended):
        return False
  return True


def conjugator_multiplicity_demo(
    n: int, trials: int, rng: np.random.RandomState) -> int:
  """Counts trials where u and v = u h conjugate h to the same element.

  For random h and u, checks conj(h, u) == conj(h, u h), and that v differs
  from u unless h is the identity.

  Returns:
    Number of verified trials; equals `trials` unless the model is broken.
  """
  if n < 2 or trials < 1:
    raise ValueError('need n >= 2 and trials >= 1, got {} and {}'.format(
        n, trials))
  verified = 0
  for _ in range(trials):
    h = nilpotent.random_element(n, rng)
    u = nilpotent.random_element(n, rng)
    if _multiplicity_holds(h, u):
      verified += 1
  return verified


def _multiplicity_holds(h: NilElement, u: NilElement) -> bool:
  v = nilpotent.mul(u, h)
  if nilpotent.conj(h, u) != nilpotent.conj(h, v):
    return False
  return h.is_identity() or v != u


AttackFn = Callable[[amalgam.PlatformParams, wire.Message, int, int],
                    AttackReport]

METHODS = {
    Method.BRUTE_FORCE.value:
        lambda params, msg, max_len, budget: brute_force_csp(
            params, msg, max_len, budget),
    Method.LENGTH_BASED.value:
        lambda params, msg, max_len, budget: length_based_attack(
            params, msg, budget),
}  # type: Dict[str, AttackFn]


def run_attack(
    method: str,
    params: amalgam.PlatformParams,
    msg: wire.Message,
    max_len: int,
    budget: int,
) -> AttackReport:
  """Dispatches to the attack registered under `method`."""
  if method not in METHODS:
    raise ValueError('unknown attack method {!r}, expected one of {}'.format(
        method, sorted(METHODS)))
  return METHODS[method](params, msg, max_len, budget)
