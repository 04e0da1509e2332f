"""Two-party handshake, wire format and transport."""
from akx.protocol import handshake
from akx.protocol import transport
from akx.protocol import wire
