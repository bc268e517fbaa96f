"""Numerical laboratory for logarithmic uncertainty inequalities of radial functions.

Submodules
----------
radial
    Radial quadrature grids and profiles.
spectral
    Radial Fourier (Hankel) transform and ``|D|^s`` multipliers.
functionals
    Norms, entropies, log-moments and HLS double integrals.
constants
    Closed-form constants and the exponent algebra.
derivative
    Differentiation of parametric inequalities at their equality point.
lab
    Inequality registry, trial profiles, gap scans and constant search.
cli
    Command-line harness (``loguncert``).
"""

from . import constants, derivative, errors, functionals, lab, radial, spectral
from .errors import *  # noqa: F401,F403
from .kernels import BACKEND
from .radial import RadialGrid, RadialProfile, SpectralProfile, make_grid, normalize_l2, sample
from .spectral import apply_fractional, fourier_radial, fourier_radial_inverse

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "RadialGrid",
    "RadialProfile",
    "SpectralProfile",
    "make_grid",
    "sample",
    "normalize_l2",
    "fourier_radial",
    "fourier_radial_inverse",
    "apply_fractional",
    "constants",
    "derivative",
    "functionals",
    "lab",
    "radial",
    "spectral",
] + errors.__all__
