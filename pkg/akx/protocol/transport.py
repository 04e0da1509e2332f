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
"""Blocking TCP transport for the handshake.

The connecting side is the sender: it writes M1 and reads M2. The listening
side is the receiver: it reads M1 and answers with M2. Exchanges on one
connection are strictly sequential.
"""
import socket
from typing import Optional, Tuple

from absl import logging
import numpy as np
from akx.core import amalgam
from akx.protocol import handshake
from akx.protocol import wire

DEFAULT_TIMEOUT = 30.0


def _recv_exactly(sock: socket.socket, length: int) -> bytes:
  buf = bytearray()
  while len(buf) < length:
    chunk = sock.recv(length - len(buf))
    if not chunk:
      raise wire.TruncatedFrameError(
          'connection closed after {} of {} bytes'.format(len(buf), length))
    buf.extend(chunk)
  return bytes(buf)


def recv_message(sock: socket.socket) -> wire.Message:
  header = _recv_exactly(sock, 4)
  payload = _recv_exactly(sock, wire.frame_length(header))
  return wire.decode_message(header + payload)


def send_message(sock: socket.socket, msg: wire.Message):
  sock.sendall(wire.encode_message(msg))


class Server:
  """Receiver end of the handshake, listening on a TCP port.

  Example usage:
    server = Server(params, seed=7)
    port = server.bind('127.0.0.1', 0)
    key = server.serve_once()
  """

  def __init__(
      self,
      params: amalgam.PlatformParams,
      seed: Optional[int] = None,
      timeout: float = DEFAULT_TIMEOUT,
  ):
    self.params = params
    self.rng = np.random.RandomState(seed)
    self.timeout = timeout
    self._listener = None  # type: Optional[socket.socket]

  def bind(self, host: str = '127.0.0.1', port: int = 0) -> int:
    """Starts listening and returns the bound port."""
    listener = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    listener.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    listener.bind((host, port))
    listener.listen(1)
    listener.settimeout(self.timeout)
    self._listener = listener
    bound = listener.getsockname()[1]
    logging.info('listening on %s:%d, params %s', host, bound,
                 handshake.fingerprint(self.params))
    return bound

  def serve_once(self) -> handshake.SessionKey:
    """Accepts one connection and completes one handshake on it."""
    if self._listener is None:
      raise handshake.SessionStateError('bind() must be called first')
    conn, address = self._listener.accept()
    with conn:
      conn.settimeout(self.timeout)
      logging.info('connection from %s:%d', *address[:2])
      session = handshake.Session(
          self.params, handshake.Role.RECEIVER, rng=self.rng)
      session.receive(recv_message(conn))
      send_message(conn, session.outgoing())
      return session.session_key()

  def serve_forever(self):
    """Serves handshakes until the listener is closed.

    A client whose handshake fails is logged and skipped.
    """
    while True:
      try:
        key = self.serve_once()
      except (wire.WireError, amalgam.TokenIndexError,
              handshake.RoleMismatchError, OSError) as e:
        if self._listener is None:
          return
        logging.warning('handshake failed: %r', e)
        continue
      print(key.hex(), flush=True)

  def close(self):
    if self._listener is not None:
      self._listener.close()
      self._listener = None


def parse_address(address: str) -> Tuple[str, int]:
  """Splits 'HOST:PORT'."""
  host, sep, port = address.rpartition(':')
  if not sep or not host or not port.isdigit():
    raise ValueError('expected HOST:PORT, got {!r}'.format(address))
  return host, int(port)


def connect(
    host: str,
    port: int,
    params: amalgam.PlatformParams,
    seed: Optional[int] = None,
    timeout: float = DEFAULT_TIMEOUT,
) -> handshake.SessionKey:
  """Runs the sender side of one handshake against a Server."""
  session = handshake.Session(
      params, handshake.Role.SENDER, rng=np.random.RandomState(seed))
  logging.info('connecting to %s:%d, params %s', host, port,
               handshake.fingerprint(params))
  with socket.create_connection((host, port), timeout=timeout) as sock:
    send_message(sock, session.outgoing())
    session.receive(recv_message(sock))
  return session.session_key()
