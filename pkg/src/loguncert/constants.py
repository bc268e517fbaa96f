"""Closed-form constants and the parameter algebra of the inequalities.

All Gamma-function expressions are evaluated in log space, since
``Gamma(d)`` overflows long before the dimensions of interest run out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import digamma, gammaln

from .errors import InconsistentParameters, NumericalFailure, OutOfRange
from .functionals import InequalityParams, _rubin_range

__all__ = [
    "ConstantValue",
    "hls_constant",
    "log_hls_constant",
    "log_hls_constant_fd",
    "log_hls_constant_value",
    "rubin_beta",
    "theta_exponents",
    "interpolated_constant_bound",
    "derivative_coefficients",
    "beckner_bound",
    "log_sobolev_rhs",
    "optimal_log_sobolev_scale",
    "hausdorff_young_constant",
]

PROVENANCES = ("closed-form", "finite-difference", "empirical")
FD_STEP = 1e-5
COEFFICIENT_TOL = 1e-12


@dataclass(frozen=True)
class ConstantValue:
    """A constant together with how it was obtained.

    Attributes
    ----------
    value : float
    provenance : str
        ``"closed-form"``, ``"finite-difference"`` or ``"empirical"``.
    inputs : InequalityParams
        Parameter snapshot the value was computed for.
    """

    value: float
    provenance: str
    inputs: InequalityParams

    def __post_init__(self) -> None:
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")

    def agrees(self, other: "ConstantValue", tol: float = 1e-6) -> bool:
        return abs(self.value - other.value) <= tol * max(1.0, abs(self.value))


def _check_dimension(d: int) -> None:
    if int(d) != d or d < 1:
        raise OutOfRange(f"dimension must be an integer >= 1, got {d!r}")


def _log_hls(d: int, lam: float) -> float:
    # log k_lam, valid for lam < d (including small negative lam)
    return (0.5 * lam * math.log(math.pi) + gammaln(0.5 * (d - lam)) - gammaln(d - 0.5 * lam)
            + (lam / d - 1.0) * (gammaln(0.5 * d) - gammaln(d)))


def hls_constant(d: int, lam: float) -> float:
    """Sharp constant ``k_lam`` of the diagonal HLS inequality.

    ``k_lam = pi^{lam/2} Gamma(d/2 - lam/2) / Gamma(d - lam/2)
    * (Gamma(d/2) / Gamma(d))^{-1 + lam/d}`` for ``0 <= lam < d``.
    """
    _check_dimension(d)
    if not 0.0 <= lam < d:
        raise OutOfRange(f"HLS exponent must satisfy 0 <= lambda < d = {d}, got {lam}")
    return math.exp(_log_hls(d, lam))


def log_hls_constant(d: int) -> float:
    """``C_0 = d/dlam k_lam at lam = 0`` by logarithmic differentiation.

    ``C_0 = log(pi)/2 - psi(d/2)/2 + psi(d)/2 + log(Gamma(d/2)/Gamma(d))/d``.
    """
    _check_dimension(d)
    return float(0.5 * math.log(math.pi) - 0.5 * digamma(0.5 * d) + 0.5 * digamma(d)
                 + (gammaln(0.5 * d) - gammaln(d)) / d)


def log_hls_constant_fd(d: int, h: float = FD_STEP) -> ConstantValue:
    """Centered finite difference ``(k_h - k_{-h}) / 2h`` of the HLS constant."""
    _check_dimension(d)
    value = (math.exp(_log_hls(d, h)) - math.exp(_log_hls(d, -h))) / (2.0 * h)
    return ConstantValue(value, "finite-difference", InequalityParams(d=d, lam=0.0))


def log_hls_constant_value(d: int) -> ConstantValue:
    """:func:`log_hls_constant` wrapped with its provenance."""
    return ConstantValue(log_hls_constant(d), "closed-form", InequalityParams(d=d, lam=0.0))


def rubin_beta(d: int, p: float, s: float) -> float:
    """Weight power ``beta = s + d/p - d/2`` of the radial weighted inequality.

    Raises :class:`OutOfRange` unless ``0 <= s < d/2`` and
    ``2 <= p <= 2/(1-2s)_+``; ``p = inf`` is allowed once ``s >= 1/2``.
    """
    _check_dimension(d)
    try:
        _rubin_range(d, p, s)
    except InconsistentParameters as exc:
        raise OutOfRange(str(exc)) from None
    inv_p = 0.0 if math.isinf(p) else 1.0 / p
    return s + d * inv_p - 0.5 * d


def theta_exponents(p1: float, theta: float) -> tuple[float, float]:
    """Interpolated exponent ``p_theta`` and the factor ``beta_theta / beta_1``.

    ``1/p_theta = (1 - theta)/2 + theta/p1`` and ``beta_theta = theta beta_1``.
    """
    if not 0.0 <= theta <= 1.0:
        raise OutOfRange(f"theta must lie in [0, 1], got {theta}")
    if not p1 >= 2.0:
        raise OutOfRange(f"p1 must be >= 2, got {p1}")
    inv = 0.5 * (1.0 - theta) + (0.0 if math.isinf(p1) else theta / p1)
    return (math.inf if inv == 0.0 else 1.0 / inv), float(theta)


def interpolated_constant_bound(C1: float, s: float, s1: float) -> float:
    """Bound ``C1^{s/s1}`` on the constant at the interpolated exponents."""
    if not C1 > 0:
        raise OutOfRange(f"endpoint constant must be positive, got {C1}")
    if not (s1 > 0 and 0.0 <= s <= s1):
        raise OutOfRange(f"need 0 <= s <= s1 with s1 > 0, got s = {s}, s1 = {s1}")
    return math.exp((s / s1) * math.log(C1))


def derivative_coefficients(d: int, s1: float, p1: float) -> tuple[float, float]:
    """``(dp/ds, dbeta/ds)`` at ``s = 0`` along the interpolation path.

    ``dp/ds = (4/s1)(1/2 - 1/p1) = (4/d)(1 - beta1/s1)`` and
    ``dbeta/ds = beta1/s1`` with ``beta1 = s1 + d/p1 - d/2``.
    """
    if not s1 > 0:
        raise InconsistentParameters(f"s1 must be positive, got {s1}")
    try:
        beta1 = rubin_beta(d, p1, s1)
    except OutOfRange as exc:
        raise InconsistentParameters(str(exc)) from None
    inv_p1 = 0.0 if math.isinf(p1) else 1.0 / p1
    dp_a = (4.0 / s1) * (0.5 - inv_p1)
    dp_b = (4.0 / d) * (1.0 - beta1 / s1)
    if abs(dp_a - dp_b) > COEFFICIENT_TOL * max(1.0, abs(dp_a)):
        raise NumericalFailure(f"coefficient forms disagree: {dp_a} vs {dp_b}")
    return dp_a, beta1 / s1


def beckner_bound(d: int) -> float:
    """Right-hand side ``(d/2)(log 2 - 1)`` of the entropic uncertainty bound."""
    _check_dimension(d)
    return 0.5 * d * (math.log(2.0) - 1.0)


def log_sobolev_rhs(d: int, a: float, grad_sq: float) -> float:
    """``(a^2/pi) int |grad f|^2 - d (1 + log a)``."""
    _check_dimension(d)
    if not a > 0:
        raise OutOfRange(f"log-Sobolev scale a must be positive, got {a}")
    if grad_sq < 0:
        raise OutOfRange(f"gradient energy must be nonnegative, got {grad_sq}")
    return (a * a / math.pi) * grad_sq - d * (1.0 + math.log(a))


def optimal_log_sobolev_scale(d: int, grad_sq: float) -> float:
    """Minimizer ``a* = sqrt(pi d / (2 grad_sq))`` of :func:`log_sobolev_rhs`."""
    if not grad_sq > 0:
        raise OutOfRange(f"gradient energy must be positive, got {grad_sq}")
    return math.sqrt(math.pi * d / (2.0 * grad_sq))


def hausdorff_young_constant(d: int, p: float) -> float:
    """Sharp (Babenko-Beckner) constant for ``||f^||_{p'} <= A ||f||_p``.

    In the unitary ``(2 pi)^{-d/2} e^{-i xi.x}`` convention this is
    ``(2 pi)^{d (1/2 - 1/p)} (p^{1/p} / p'^{1/p'})^{d/2}`` for ``1 <= p <= 2``.
    """
    _check_dimension(d)
    if not 1.0 <= p <= 2.0:
        raise OutOfRange(f"Hausdorff-Young exponent must lie in [1, 2], got {p}")
    if p == 1.0:
        return (2.0 * math.pi) ** (-0.5 * d)
    q = p / (p - 1.0)
    log_a = math.log(p) / p - math.log(q) / q
    return math.exp(d * (0.5 - 1.0 / p) * math.log(2.0 * math.pi) + 0.5 * d * log_a)
