"""Parallel-set volume toolkit: python bindings over the C++ core."""
from ._paraset import *  # noqa: F401,F403
