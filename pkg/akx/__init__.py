"""Key agreement over an amalgamated product of braid and Thompson groups."""
from akx import attack
from akx import core
from akx import pipelines
from akx import protocol
