"""Generations of monic polynomials and solvable goldfish-type dynamics."""

from . import dynamics, errors, permgen, polycore, solvers, spectra, verify

__all__ = [
    "dynamics",
    "errors",
    "permgen",
    "polycore",
    "solvers",
    "spectra",
    "verify",
]

__version__ = "0.1.0"
