"""Exact and floating-point Kloosterman-type sums."""

from ._core import *  # noqa: F401,F403
from ._core import KloosterError, __doc__  # noqa: F401

__version__ = "0.1.0"
