"""Verified numerics for the bilinear Klein-Gordon estimates in one dimension.

Modules: :mod:`~kgverify.interval` (outward-rounded interval arithmetic),
:mod:`~kgverify.kgfun` (the named functions), :mod:`~kgverify.certifier`
(branch-and-bound certificates and replay), :mod:`~kgverify.sharpness`
(counterexamples and extremal traces), :mod:`~kgverify.bilinear` (space-time
versus frequency-side norms) and :mod:`~kgverify.cli`.
"""

from .interval import Interval

__version__ = "0.1.0"
__all__ = ["Interval", "__version__"]
