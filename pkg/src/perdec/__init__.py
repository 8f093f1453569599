"""Exact decoupling of discrete-time linear periodic systems.

The package decides whether a periodic system admits row-by-row decoupling
by periodic state feedback and, when it does, synthesizes the feedback and
input-transformation gains.  All computation is exact over the rationals.
"""

from ._kernel import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["KERNEL_BACKEND", "__version__"]
