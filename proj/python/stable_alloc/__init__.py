"""Stable allocations of discretized Lebesgue measure to point centers."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
