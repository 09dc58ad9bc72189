"""Eisenstein series, Kronecker limit formulas and scattering constants
for the level-2 congruence group and the Fermat-curve subgroups of
PSL(2, Z)."""

from .fermat import GAMMA1, GAMMA2, FermatCusp, GroupId, cusp_reps, gamma_n
from .sl2 import Cusp, GammaWord, Mat2Z

__all__ = [
    "GAMMA1",
    "GAMMA2",
    "Cusp",
    "FermatCusp",
    "GammaWord",
    "GroupId",
    "Mat2Z",
    "cusp_reps",
    "gamma_n",
]

__version__ = "0.1.0"
