"""Beam pipelines."""
from akx.pipelines import beamlib
