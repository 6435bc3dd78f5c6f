"""Event commonsense scoring for open-domain dialogue responses.

The compiled extension module carries the full implementation; this package
re-exports its public surface.
"""

from accent._core import *  # noqa: F401,F403
from accent._core import __version__  # noqa: F401
