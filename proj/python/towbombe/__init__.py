"""Tug-of-war bandit teams: C++ core with a thin Python surface."""

from ._core import *  # noqa: F401,F403
from . import _core

__version__ = "0.1.0"
__all__ = [name for name in dir(_core) if not name.startswith("_")]
