"""Kernel backend selection.

The compiled backend is used when it imported cleanly and ``PERDEC_PURE``
is not set; otherwise the pure Python twin.  Both expose the same functions
and are checked against each other in the test suite.
"""

from __future__ import annotations

import os

from . import polyops_py

BACKEND = "python"
_impl = polyops_py

if not os.environ.get("PERDEC_PURE"):
    try:
        from . import polyops_cy as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        pass

trim = _impl.trim
add = _impl.add
sub = _impl.sub
neg = _impl.neg
mul = _impl.mul
scale = _impl.scale
divmod_ = _impl.divmod_
eval_at = _impl.eval_at
deriv = _impl.deriv
gcd_monic = _impl.gcd_monic

__all__ = [
    "BACKEND",
    "trim",
    "add",
    "sub",
    "neg",
    "mul",
    "scale",
    "divmod_",
    "eval_at",
    "deriv",
    "gcd_monic",
]
