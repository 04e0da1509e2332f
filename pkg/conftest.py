"""Pytest wiring: parse absl flags as absltest.main() would."""
import sys

from absl import flags
from absl.testing import absltest  # noqa: F401  (defines --test_tmpdir etc.)


def pytest_configure(config):
  del config
  flags.FLAGS(sys.argv[:1], known_only=True)
