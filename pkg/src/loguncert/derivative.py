"""Differentiating a parametric inequality at its equality point.

Given ``F_t <= k_t G_t`` for ``t >= 0`` with ``F_0 = k_0 G_0``, the
one-sided quotients ``(F_t - F_0)/t <= (k_t G_t - k_0 G_0)/t`` pass to the
limit ``F'(0) <= G_0 k'(0) + k_0 G'(0)``.  The limits are taken numerically
by polynomial (Neville) extrapolation of the quotients to ``t = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .constants import derivative_coefficients, hls_constant, rubin_beta, theta_exponents
from .errors import (EqualityHypothesisViolated, InconsistentParameters, InvalidParameters,
                     StepOutsideDomain)
from .functionals import hls_energy, mass, sobolev_norm, weighted_lp_norm
from .radial import RadialProfile

__all__ = [
    "DEFAULT_STEPS",
    "ParametricFamily",
    "DerivativeReport",
    "differentiate_at_zero",
    "extrapolate",
    "identity_family",
    "sobolev_family",
    "rubin_family",
    "hls_family",
]

DEFAULT_STEPS = tuple(0.1 * 2.0 ** -k for k in range(7))
EQUALITY_TOL = 1e-8
FINITE_T_TOL = 1e-6

Functional = Callable[[float, RadialProfile], float]


@dataclass(frozen=True)
class ParametricFamily:
    """A family ``F_t <= k_t G_t`` valid on ``[0, t_max]``.

    Attributes
    ----------
    name : str
    lhs, rhs_functional : callable ``(t, f) -> float``
        ``F_t(f)`` and ``G_t(f)``.
    constant : callable ``t -> float``
        ``k_t``.
    t_max : float
        Right end of the validity interval.
    equality_check : str
        Why ``F_0 = k_0 G_0`` holds for the family.
    constant_label : str
        ``"exact"``, ``"bound"`` or ``"bound via empirical constant"``.
    """

    name: str
    lhs: Functional
    rhs_functional: Functional
    constant: Callable[[float], float]
    t_max: float
    equality_check: str = ""
    constant_label: str = "exact"

    def check_equality(self, f: RadialProfile, tol: float = EQUALITY_TOL) -> float:
        """Return ``F_0`` after confirming ``|F_0 - k_0 G_0| <= tol |F_0|``."""
        f0 = self.lhs(0.0, f)
        r0 = self.constant(0.0) * self.rhs_functional(0.0, f)
        if not abs(f0 - r0) <= tol * max(abs(f0), 1e-300):
            raise EqualityHypothesisViolated(
                f"{self.name}: F_0 = {f0!r} but k_0 G_0 = {r0!r}")
        return f0


@dataclass(frozen=True)
class DerivativeReport:
    """Both sides of the differentiated inequality with error estimates.

    ``slack = rhs_derivative - lhs_derivative``; the rhs derivative is
    ``G_0 k'(0) + k_0 G'(0)``.
    """

    family: str
    lhs_derivative: float
    rhs_derivative: float
    lhs_error: float
    rhs_error: float
    steps: tuple
    extrapolation_order: int
    lhs_quotients: tuple
    rhs_quotients: tuple
    lhs_error_trace: tuple
    rhs_error_trace: tuple
    finite_t_slack: tuple
    constant_label: str = "exact"
    components: dict = field(default_factory=dict)

    @property
    def slack(self) -> float:
        return self.rhs_derivative - self.lhs_derivative

    @property
    def error(self) -> float:
        return self.lhs_error + self.rhs_error

    @property
    def holds(self) -> bool:
        """Whether ``slack >= -(reported error)``."""
        return self.slack >= -self.error


def extrapolate(steps: Sequence[float], values: Sequence[float],
                order: int = 2) -> tuple[float, float, list[float]]:
    """Extrapolate ``values(h)`` to ``h = 0`` with Neville's scheme.

    Returns the estimate that uses the ``order + 1`` smallest steps, its
    error estimate (difference to the same-order estimate one step
    earlier) and the sequence of such error estimates along the steps.
    """
    h = np.asarray(steps, dtype=float)
    table = [np.asarray(values, dtype=float)]
    for j in range(1, order + 1):
        prev = table[-1]
        lo, hi = h[:-j], h[j:]
        table.append((lo * prev[1:] - hi * prev[:-1]) / (lo - hi))
    top = table[-1]
    if top.size < 2:
        raise InvalidParameters(f"need at least {order + 2} steps for order {order}")
    trace = list(np.abs(np.diff(top)))
    return float(top[-1]), float(trace[-1]), [float(x) for x in trace]


def _check_steps(steps: Sequence[float], t_max: float) -> tuple:
    steps = tuple(float(h) for h in steps)
    if not steps:
        raise StepOutsideDomain("no steps given")
    for h in steps:
        if not 0.0 < h <= t_max:
            raise StepOutsideDomain(f"step {h} is outside the domain (0, {t_max}]")
    if any(b >= a for a, b in zip(steps, steps[1:])):
        raise StepOutsideDomain("steps must be strictly decreasing")
    return steps


def differentiate_at_zero(family: ParametricFamily, f: RadialProfile,
                          steps: Sequence[float] = DEFAULT_STEPS,
                          order: int = 2) -> DerivativeReport:
    """One-sided derivatives of both sides of the family at ``t = 0``."""
    steps = _check_steps(steps, family.t_max)
    f0 = family.check_equality(f)
    g0 = family.rhs_functional(0.0, f)
    k0 = family.constant(0.0)
    q_lhs, q_g, q_k, finite = [], [], [], []
    for h in steps:
        fh = family.lhs(h, f)
        gh = family.rhs_functional(h, f)
        kh = family.constant(h)
        q_lhs.append((fh - f0) / h)
        q_g.append((gh - g0) / h)
        q_k.append((kh - k0) / h)
        finite.append(kh * gh - fh)
    q_rhs = [g0 * a + k0 * b for a, b in zip(q_k, q_g)]
    lhs, lhs_err, lhs_trace = extrapolate(steps, q_lhs, order)
    rhs, rhs_err, rhs_trace = extrapolate(steps, q_rhs, order)
    dk = extrapolate(steps, q_k, order)[0]
    dg = extrapolate(steps, q_g, order)[0]
    return DerivativeReport(
        family=family.name, lhs_derivative=lhs, rhs_derivative=rhs,
        lhs_error=lhs_err, rhs_error=rhs_err, steps=steps, extrapolation_order=order,
        lhs_quotients=tuple(q_lhs), rhs_quotients=tuple(q_rhs),
        lhs_error_trace=tuple(lhs_trace), rhs_error_trace=tuple(rhs_trace),
        finite_t_slack=tuple(finite), constant_label=family.constant_label,
        components={"F0": f0, "G0": g0, "k0": k0, "dG": dg, "dk": dk})


# ---------------------------------------------------------------------------
# families


def identity_family(t_max: float = 1.0) -> ParametricFamily:
    """``F_t = G_t = e^t``, ``k_t = 1``: both derivatives equal 1, slack 0."""
    return ParametricFamily(
        name="identity",
        lhs=lambda t, f: math.exp(t),
        rhs_functional=lambda t, f: math.exp(t),
        constant=lambda t: 1.0,
        t_max=t_max,
        equality_check="F_0 = G_0 = 1 and k_0 = 1")


def sobolev_family(t_max: float = 0.4) -> ParametricFamily:
    """``F_s = G_s = ||f||_{H^s}``, ``k = 1``; ``F'(0) = int |f^|^2 log|xi|`` for unit f."""
    def norm(s, f):
        return sobolev_norm(f, s)
    return ParametricFamily(
        name="sobolev-norm", lhs=norm, rhs_functional=norm, constant=lambda s: 1.0,
        t_max=t_max, equality_check="identical sides")


def rubin_family(d: int, s1: float, p1: float, constant_mode: str = "bound",
                 constant: float | None = None) -> ParametricFamily:
    """Weighted-norm family along the interpolation path.

    ``F_s = || |x|^{-beta(s)} f ||_{p(s)}``, ``G_s = ||f||_{H^s}`` and
    ``k_s = C^{s/s1}`` on ``[0, s1]``, where ``p(s) = p_{s/s1}`` and
    ``beta(s) = (s/s1) beta1``.  ``constant`` is the endpoint constant
    ``C(p1, s1)``: a bound supplied by the caller (``"bound"``) or an
    estimate from the lab (``"empirical"``).
    """
    if constant_mode not in ("bound", "empirical"):
        raise InvalidParameters(f"constant_mode must be 'bound' or 'empirical', got {constant_mode!r}")
    if constant is None or not constant > 0:
        raise InvalidParameters("rubin_family needs a positive endpoint constant C(p1, s1)")
    if not s1 > 0:
        raise InconsistentParameters(f"s1 must be positive, got {s1}")
    if math.isinf(p1):
        raise InconsistentParameters("the endpoint exponent p1 must be finite (take s1 < 1/2)")
    derivative_coefficients(d, s1, p1)  # validates (s1, p1)
    beta1 = rubin_beta(d, p1, s1)
    log_c = math.log(constant)

    def path(s):
        p, factor = theta_exponents(p1, min(s / s1, 1.0))
        return p, factor * beta1

    def lhs(s, f):
        p, beta = path(s)
        return weighted_lp_norm(f, p, beta)

    def rhs(s, f):
        return sobolev_norm(f, s)

    label = "bound" if constant_mode == "bound" else "bound via empirical constant"
    return ParametricFamily(
        name=f"rubin(d={d}, s1={s1:g}, p1={p1:g})", lhs=lhs, rhs_functional=rhs,
        constant=lambda s: math.exp((s / s1) * log_c), t_max=s1,
        equality_check="at s = 0 the exponents collapse to (p, beta) = (2, 0), "
                       "both sides equal ||f||_2 and k_0 = 1",
        constant_label=label)


def hls_family(d: int, t_max: float | None = None) -> ParametricFamily:
    """``F_lam = int int f f |x-y|^{-lam}``, ``G_lam = ||f||_{2d/(2d-lam)}^2``, ``k_lam``."""
    t_max = min(1.0, 0.5 * d) if t_max is None else t_max

    def lhs(lam, f):
        return mass(f) ** 2 if lam == 0.0 else hls_energy(f, lam)

    def rhs(lam, f):
        return weighted_lp_norm(f, 2.0 * d / (2.0 * d - lam), 0.0) ** 2

    return ParametricFamily(
        name=f"hls(d={d})", lhs=lhs, rhs_functional=rhs,
        constant=lambda lam: hls_constant(d, lam), t_max=t_max,
        equality_check="at lambda = 0 both sides equal (int f)^2 for f >= 0")
