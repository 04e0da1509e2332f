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
"""Binary framing of handshake messages.

All integers are big-endian.

  frame       = length (4 bytes) || payload
  payload     = 'AK' || version 0x01 || msg_type (0x01 M1, 0x02 M2)
                || n (2 bytes) || n token words
  token word  = count (4 bytes) || count letters
  letter      = kind (0x01 W, 0x02 U) || index (2 bytes, 1-based)
                || sign (0x00 for +1, 0x01 for -1)
"""
import enum
import struct
import typing
from typing import Tuple

from akx.core import words

MAGIC = b'AK'
VERSION = 1

_FRAME_HEADER = struct.Struct('>I')
_PAYLOAD_HEADER = struct.Struct('>2sBBH')
_COUNT = struct.Struct('>I')
_LETTER = struct.Struct('>BHB')

_KIND_BY_FAMILY = {words.Family.TOKEN_W: 1, words.Family.TOKEN_U: 2}
_FAMILY_BY_KIND = {v: k for k, v in _KIND_BY_FAMILY.items()}


class MessageType(enum.IntEnum):
  M1 = 1  # sender -> receiver: A^-1 U_i A
  M2 = 2  # receiver -> sender: B^-1 W_i B


class Message(typing.NamedTuple):
  """Handshake message: one token word per amalgamated generator.

  Attributes:
    msg_type: M1 or M2.
    payload: n token words.
  """

  msg_type: MessageType
  payload: Tuple[words.Word, ...]


class WireError(ValueError):
  """Base class for malformed frames."""


class BadMagicError(WireError):
  """Frame does not start with the protocol magic."""


class BadVersionError(WireError):
  """Frame carries an unsupported protocol version."""


class TruncatedFrameError(WireError):
  """Frame ends before its declared contents."""


class IndexRangeError(WireError):
  """Token index outside 1..n."""


class MalformedFrameError(WireError):
  """Frame is well delimited but its contents are invalid."""


def encode_message(msg: Message) -> bytes:
  """Serializes a message into a length-prefixed frame.

  Raises:
    WireError: if the payload has fewer than 2 words or contains letters that
      cannot be framed.
  """
  n = len(msg.payload)
  if n < 2:
    raise WireError('payload needs at least 2 token words, got {}'.format(n))
  if n > 0xFFFF:
    raise WireError('too many token words: {}'.format(n))
  chunks = [_PAYLOAD_HEADER.pack(MAGIC, VERSION, MessageType(msg.msg_type), n)]
  for word in msg.payload:
    chunks.append(_COUNT.pack(len(word)))
    for letter in word:
      kind = _KIND_BY_FAMILY.get(letter.family)
      if kind is None:
        raise WireError('cannot frame non-token letter {}'.format(letter))
      if not 1 <= letter.index <= n:
        raise IndexRangeError('token {} out of range 1..{}'.format(letter, n))
      chunks.append(_LETTER.pack(kind, letter.index, 0 if letter.sign > 0
                                 else 1))
  payload = b''.join(chunks)
  return _FRAME_HEADER.pack(len(payload)) + payload


def frame_length(header: bytes) -> int:
  """Payload length announced by a 4-byte frame header."""
  if len(header) != _FRAME_HEADER.size:
    raise TruncatedFrameError('frame header needs {} bytes, got {}'.format(
        _FRAME_HEADER.size, len(header)))
  return _FRAME_HEADER.unpack(header)[0]


class _Reader:
  """Cursor over a payload that raises TruncatedFrameError on overrun."""

  def __init__(self, data: bytes):
    self.data = data
    self.offset = 0

  def unpack(self, fmt: struct.Struct) -> tuple:
    end = self.offset + fmt.size
    if end > len(self.data):
      raise TruncatedFrameError('frame ends at byte {}, needed {}'.format(
          len(self.data), end))
    values = fmt.unpack_from(self.data, self.offset)
    self.offset = end
    return values


def decode_message(frame: bytes) -> Message:
  """Parses a frame produced by encode_message.

  Args:
    frame: length prefix followed by the payload.

  Returns:
    The decoded Message.

  Raises:
    BadMagicError: if the payload does not start with 'AK'.
    BadVersionError: on an unknown version byte.
    TruncatedFrameError: if the frame is shorter than announced.
    IndexRangeError: on a token index outside 1..n.
    MalformedFrameError: on unknown message types, letter kinds or signs, or
      trailing bytes.
  """
  length = frame_length(frame[:_FRAME_HEADER.size])
  payload = frame[_FRAME_HEADER.size:]
  if len(payload) < length:
    raise TruncatedFrameError('frame announces {} bytes, has {}'.format(
        length, len(payload)))
  if len(payload) > length:
    raise MalformedFrameError('{} trailing bytes after frame'.format(
        len(payload) - length))
  reader = _Reader(payload)
  magic, version, msg_type, n = reader.unpack(_PAYLOAD_HEADER)
  if magic != MAGIC:
    raise BadMagicError('bad magic {!r}'.format(magic))
  if version != VERSION:
    raise BadVersionError('unsupported version {}'.format(version))
  if msg_type not in MessageType.__members__.values():
    raise MalformedFrameError('unknown message type {}'.format(msg_type))
  token_words = []
  for _ in range(n):
    count, = reader.unpack(_COUNT)
    letters = []
    for _ in range(count):
      kind, index, sign = reader.unpack(_LETTER)
      if kind not in _FAMILY_BY_KIND:
        raise MalformedFrameError('unknown letter kind {}'.format(kind))
      if sign not in (0, 1):
        raise MalformedFrameError('bad sign byte {}'.format(sign))
      if not 1 <= index <= n:
        raise IndexRangeError('token index {} out of range 1..{}'.format(
            index, n))
      letters.append(words.Letter(_FAMILY_BY_KIND[kind], index,
                                  1 if sign == 0 else -1))
    token_words.append(tuple(letters))
  if reader.offset != len(payload):
    raise MalformedFrameError('{} unparsed bytes in payload'.format(
        len(payload) - reader.offset))
  return Message(MessageType(msg_type), tuple(token_words))
