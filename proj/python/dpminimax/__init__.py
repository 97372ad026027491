"""Differentially private minimax optimization."""

from ._dpminimax import *  # noqa: F401,F403
from ._dpminimax import __doc__ as _doc

__all__ = [name for name in dir() if not name.startswith("_")]
__doc__ = _doc
