"""Schur analysis for axially hyperholomorphic quaternionic functions.

Quaternion / quaternion-matrix arithmetic, the Appell polynomial basis with
its series calculus, block Toeplitz multiplier tests, the Schur algorithm,
state-space realizations (Blaschke, Herglotz, Caratheodory), and the
half-space Hardy space.
"""

from .axseries import AxialSeries, ELLIPSOID, Ellipsoid, Tail
from .quatlin import Quaternion, QuatMatrix

__version__ = "0.1.0"

__all__ = [
    "AxialSeries",
    "ELLIPSOID",
    "Ellipsoid",
    "Quaternion",
    "QuatMatrix",
    "Tail",
    "__version__",
]
