"""W-state magnetic-field-gradient estimation toolkit.

Python bindings over the C++ core: probe states and phase evolution, the two
measurement bases with exact outcome distributions, Fisher / quantum Fisher
information, maximum-likelihood field recovery with least-squares gradient
fitting, and Monte Carlo experiments against the Cramer-Rao bound.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
