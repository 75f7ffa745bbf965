"""Lorentz-covariant field position and spin operators for massive spin-1/2 fields.

Momentum-space constructions in the Weyl basis, with numerical verification of
their commutation relations, eigenvalue equations and covariance, plus a free
wavepacket simulator contrasting the Dirac and field position operators.
"""

from fieldpos.tensor import (
    Boost,
    Momentum,
    Rotation,
    lorentz_from_word,
    minkowski_dot,
    standard_boost,
    wigner_rotation,
)

__all__ = [
    "Boost",
    "Momentum",
    "Rotation",
    "lorentz_from_word",
    "minkowski_dot",
    "standard_boost",
    "wigner_rotation",
]

__version__ = "0.1.0"
