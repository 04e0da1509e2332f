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
"""Two-party key agreement over the platform group.

The sender picks a private token word A over W_1..W_n and sends the conjugates
A^-1 U_i A; the receiver picks B over U_1..U_n and sends B^-1 W_i B. Each side
conjugates what it receives by its own secret, giving

  A^-1 B^-1 W_i B A   and   B^-1 A^-1 U_i A B,

which agree in the platform group. The shared tuple is canonicalized in the
free class-2 nilpotent group and hashed into a 32-byte session key.
"""
import base64
import enum
import hashlib
import json
import typing
from typing import Any, Dict, Mapping, Optional, Tuple

from absl import logging
import numpy as np
from akx.core import amalgam
from akx.core import nilpotent
from akx.core import words
from akx.protocol import wire

KEY_PREFIX = b'AKX1'

Message = wire.Message
MessageType = wire.MessageType
SessionKey = bytes


class Role(enum.Enum):
  SENDER = 'sender'
  RECEIVER = 'receiver'


# Family of the private word, family conjugated in the outgoing message,
# outgoing message type and expected incoming message type.
_PRIVATE_FAMILY = {
    Role.SENDER: words.Family.TOKEN_W,
    Role.RECEIVER: words.Family.TOKEN_U,
}
_CONJUGATED_FAMILY = {
    Role.SENDER: words.Family.TOKEN_U,
    Role.RECEIVER: words.Family.TOKEN_W,
}
_OUTGOING = {Role.SENDER: MessageType.M1, Role.RECEIVER: MessageType.M2}
_INCOMING = {Role.SENDER: MessageType.M2, Role.RECEIVER: MessageType.M1}


class RoleMismatchError(ValueError):
  """Raised when a party receives a message meant for its own role."""


class SessionStateError(RuntimeError):
  """Raised when a Session is driven out of order."""


class PrivateKey(typing.NamedTuple):
  """A party's secret token word.

  Attributes:
    role: sender or receiver.
    secret: reduced token word of length L in the role's family.
  """

  role: Role
  secret: words.Word


def gen_private(
    params: amalgam.PlatformParams,
    role: Role,
    rng: np.random.RandomState,
) -> PrivateKey:
  """Samples a private key of length params.L.

  Raises:
    amalgam.ParameterError: if params are invalid.
  """
  amalgam.validate(params)
  alphabet = words.Alphabet.for_family(_PRIVATE_FAMILY[role], params.n)
  return PrivateKey(role, words.random_word(alphabet, params.L, rng))


def _conjugate(word: words.Word, by: words.Word) -> words.Word:
  """by^-1 word by, freely reduced."""
  return words.free_reduce(words.invert(by) + tuple(word) + tuple(by))


def make_message(
    priv: PrivateKey, params: amalgam.PlatformParams) -> Message:
  """Conjugates the other family's generators by the private word.

  Raises:
    amalgam.ParameterError: if the private word is empty.
  """
  if not priv.secret:
    raise amalgam.ParameterError('L', 'private word is empty')
  family = _CONJUGATED_FAMILY[priv.role]
  payload = tuple(
      _conjugate((amalgam.token_generator(family, i),), priv.secret)
      for i in range(1, params.n + 1))
  return Message(_OUTGOING[priv.role], payload)


def key_from_tuple(elements) -> SessionKey:
  """SHA-256 of 'AKX1' and the ';'-joined canonical encodings."""
  digest = hashlib.sha256()
  digest.update(KEY_PREFIX)
  digest.update(b';'.join(nilpotent.canonical_bytes(g) for g in elements))
  return digest.digest()


def check_incoming(
    role: Role,
    incoming: Message,
    params: amalgam.PlatformParams,
):
  """Checks that an incoming message is one this role can derive a key from.

  Raises:
    RoleMismatchError: if the message type is not the one this role consumes.
    wire.WireError: if the payload length differs from n.
    amalgam.TokenIndexError: if a payload token is outside 1..n.
  """
  expected = _INCOMING[role]
  if incoming.msg_type != expected:
    raise RoleMismatchError('{} expects {}, got {}'.format(
        role.value, expected.name, MessageType(incoming.msg_type).name))
  if len(incoming.payload) != params.n:
    raise wire.WireError('expected {} token words, got {}'.format(
        params.n, len(incoming.payload)))
  for element in incoming.payload:
    for letter in element:
      if (letter.family not in amalgam.TOKEN_FAMILIES or
          not 1 <= letter.index <= params.n):
        raise amalgam.TokenIndexError(
            'token {} out of range 1..{}'.format(letter, params.n))


def shared_tuple(
    priv: PrivateKey,
    incoming: Message,
    params: amalgam.PlatformParams,
) -> Tuple[nilpotent.NilElement, ...]:
  """Own-side conjugates of the incoming tuple, evaluated in N_n.

  Raises:
    RoleMismatchError: if the message type is not the one this role consumes.
    wire.WireError: if the payload length differs from n.
    amalgam.TokenIndexError: if a payload token is outside 1..n.
  """
  check_incoming(priv.role, incoming, params)
  return tuple(amalgam.eval_token(_conjugate(element, priv.secret), params.n)
               for element in incoming.payload)


def derive_key(
    priv: PrivateKey,
    incoming: Message,
    params: amalgam.PlatformParams,
) -> SessionKey:
  return key_from_tuple(shared_tuple(priv, incoming, params))


def fingerprint(params: amalgam.PlatformParams) -> str:
  """Short hex digest of the canonical parameter JSON, for logs."""
  text = json.dumps(params.to_config(), sort_keys=True)
  return hashlib.sha256(text.encode('utf-8')).hexdigest()[:16]


class _State(enum.Enum):
  FRESH = 0
  SENT = 1
  RECEIVED = 2
  READY = 3
  DONE = 4


class Session:
  """One party of one handshake.

  The session builds its outgoing message once and accepts one incoming
  message of the complementary type, in either order; then the key can be
  taken exactly once. Any other call sequence raises SessionStateError.

  A Session is not thread-safe; distinct sessions are independent.
  """

  def __init__(
      self,
      params: amalgam.PlatformParams,
      role: Role,
      rng: Optional[np.random.RandomState] = None,
      private_key: Optional[PrivateKey] = None,
  ):
    if private_key is None:
      if rng is None:
        raise ValueError('need either rng or private_key')
      private_key = gen_private(params, role, rng)
    elif private_key.role is not role:
      raise RoleMismatchError('private key is for {}, session is {}'.format(
          private_key.role.value, role.value))
    self.params = params
    self.role = role
    self.private_key = private_key
    self._sent = False
    self._incoming = None  # type: Optional[Message]
    self._key_taken = False

  @property
  def state(self) -> _State:
    if self._key_taken:
      return _State.DONE
    if self._sent and self._incoming is not None:
      return _State.READY
    if self._incoming is not None:
      return _State.RECEIVED
    return _State.SENT if self._sent else _State.FRESH

  def outgoing(self) -> Message:
    if self._sent:
      raise SessionStateError('outgoing message already built')
    self._sent = True
    return make_message(self.private_key, self.params)

  def receive(self, msg: Message):
    if self._incoming is not None:
      raise SessionStateError('incoming message already received')
    check_incoming(self.role, msg, self.params)
    self._incoming = msg

  def session_key(self) -> SessionKey:
    if self.state is not _State.READY:
      raise SessionStateError('cannot derive key in state {}'.format(
          self.state.name))
    key = derive_key(self.private_key, self._incoming, self.params)
    self._key_taken = True
    return key


def _encode_frame(msg: Message) -> str:
  return base64.b64encode(wire.encode_message(msg)).decode('ascii')


def _decode_frame(text: str) -> Message:
  return wire.decode_message(base64.b64decode(text))


class Transcript(typing.NamedTuple):
  """Recorded public view of one handshake.

  Attributes:
    params: platform parameters.
    m1: sender's message.
    m2: receiver's message.
    expansions: optional letter-layer realizations of each payload word,
      keyed 'm1' and 'm2'.
  """

  params: amalgam.PlatformParams
  m1: Message
  m2: Message
  expansions: Optional[Dict[str, Tuple[words.Word, ...]]] = None

  @classmethod
  def from_config(cls, config: Mapping[str, Any]) -> 'Transcript':
    """Construct a transcript from a configuration dict."""
    expansions = config.get('expansions')
    if expansions is not None:
      expansions = {k: tuple(words.parse_word(text) for text in v)
                    for k, v in expansions.items()}
    return cls(
        params=amalgam.PlatformParams.from_config(config['params']),
        m1=_decode_frame(config['m1']),
        m2=_decode_frame(config['m2']),
        expansions=expansions,
    )

  def to_config(self) -> Dict[str, Any]:
    """Create a configuration dict representing this transcript."""
    config = dict(
        params=self.params.to_config(),
        m1=_encode_frame(self.m1),
        m2=_encode_frame(self.m2),
    )
    if self.expansions is not None:
      config['expansions'] = {
          k: [words.format_word(word) for word in v]
          for k, v in self.expansions.items()}
    return config

  def with_expansions(self) -> 'Transcript':
    """Adds letter-layer expansions of every payload word."""
    expansions = {
        name: tuple(amalgam.expand(word, self.params) for word in msg.payload)
        for name, msg in (('m1', self.m1), ('m2', self.m2))}
    return self._replace(expansions=expansions)


def save_transcript(transcript: Transcript, path: str):
  with open(path, 'w') as f:
    json.dump(transcript.to_config(), f, indent=2, sort_keys=True)
    f.write('\n')


def load_transcript(path: str) -> Transcript:
  with open(path) as f:
    transcript = Transcript.from_config(json.load(f))
  amalgam.validate(transcript.params)
  return transcript


def run_handshake(
    params_a: amalgam.PlatformParams,
    rng_a: np.random.RandomState,
    params_b: amalgam.PlatformParams,
    rng_b: np.random.RandomState,
) -> Tuple[SessionKey, SessionKey, Transcript]:
  """Runs both parties in process.

  Args:
    params_a: sender's parameters.
    rng_a: sender's randomness.
    params_b: receiver's parameters.
    rng_b: receiver's randomness.

  Returns:
    (sender key, receiver key, transcript).

  Raises:
    amalgam.ParameterError: if the two parameter sets differ.
  """
  if params_a != params_b:
    raise amalgam.ParameterError(
        'params', 'sender {} and receiver {} disagree'.format(
            fingerprint(params_a), fingerprint(params_b)))
  sender = Session(params_a, Role.SENDER, rng=rng_a)
  receiver = Session(params_b, Role.RECEIVER, rng=rng_b)
  m1 = sender.outgoing()
  receiver.receive(m1)
  m2 = receiver.outgoing()
  sender.receive(m2)
  key_a = sender.session_key()
  key_b = receiver.session_key()
  logging.debug('handshake n=%d L=%d agreed=%s', params_a.n, params_a.L,
                key_a == key_b)
  return key_a, key_b, Transcript(params_a, m1, m2)


def replay(
    transcript: Transcript,
    sender_key: PrivateKey,
    receiver_key: PrivateKey,
) -> Tuple[SessionKey, SessionKey]:
  """Re-derives both session keys from a recorded transcript."""
  return (derive_key(sender_key, transcript.m2, transcript.params),
          derive_key(receiver_key, transcript.m1, transcript.params))
