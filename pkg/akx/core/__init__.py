"""Group theory: words, word problems and the nilpotent key model."""
from akx.core import amalgam
from akx.core import braid
from akx.core import nilpotent
from akx.core import thompson
from akx.core import words
