"""Spectra, kernels and Coulomb operators on the Zeeman zones of the
two-dimensional Landau problem, with exact rational checks."""

from .exactalg import ExactPoly, GaussianRational, ModelParams
from .zones import EigenState, QuantumNumbers, eigenstate, ito_poly

__version__ = "0.1.0"

__all__ = ["ExactPoly", "GaussianRational", "ModelParams", "EigenState", "QuantumNumbers",
           "eigenstate", "ito_poly", "__version__"]
