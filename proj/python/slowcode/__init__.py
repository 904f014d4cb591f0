"""Slow-time code design for FMCW mutual-interference mitigation."""

import pkgutil

# In a build tree the compiled module sits in a second portion of this package.
__path__ = pkgutil.extend_path(__path__, __name__)

from ._slowcode import *  # noqa: E402,F401,F403
from ._slowcode import __doc__  # noqa: E402,F401

__version__ = "0.1.0"
