"""Conjugacy search attacks."""
from akx.attack import csp
