"""Capacities of lossy bosonic channels under coherent-state modulation.

Thin re-export of the compiled extension; see the project README for the
matching command line tool.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
