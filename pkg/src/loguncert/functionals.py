"""Scalar functionals of radial profiles.

Every quantity is a plain quadrature sum over the grid, so the discrete
functionals inherit exact algebraic relations (for instance the derivative
of the discrete weighted norm in ``p`` is the discrete entropy).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

import numpy as np
from scipy.special import gammaln, roots_jacobi

from . import kernels
from .errors import (InconsistentParameters, NonIntegrableWeight, OutOfRange,
                     SingularExponent, UnsupportedExponent)
from .radial import RadialProfile, l2_norm

__all__ = [
    "InequalityParams",
    "weighted_lp_norm",
    "sobolev_norm",
    "gradient_sq",
    "entropy",
    "mass_entropy",
    "mass",
    "log_moment_physical",
    "log_moment_fourier",
    "hls_energy",
    "log_hls_energy",
    "riesz_constant",
    "hls_energy_fourier",
    "lp_norm_spectral",
]

RELATION_TOL = 1e-10


def _inv(p: float) -> float:
    return 0.0 if math.isinf(p) else 1.0 / p


@dataclass(frozen=True)
class InequalityParams:
    """Bundle of the scalar symbols that parametrize the inequalities.

    Unset symbols are ``None``.  :meth:`check` validates the relations
    tagged ``"rubin-consistent"`` (``beta = s + d/p - d/2`` with
    ``2 <= p <= 2/(1-2s)_+`` and ``0 <= s < d/2``) and
    ``"theta-consistent"`` (``1/p = (1-theta)/2 + theta/p1`` and
    ``beta = theta * beta1``).
    """

    d: int
    s: float | None = None
    p: float | None = None
    beta: float | None = None
    lam: float | None = None
    t: float | None = None
    theta: float | None = None
    a: float | None = None
    s1: float | None = None
    p1: float | None = None
    beta1: float | None = None

    def __post_init__(self) -> None:
        if self.t is not None and not 0.0 <= self.t <= 1.0:
            raise OutOfRange(f"t must lie in [0, 1], got {self.t}")
        if self.theta is not None and not 0.0 <= self.theta <= 1.0:
            raise OutOfRange(f"theta must lie in [0, 1], got {self.theta}")
        if self.a is not None and not self.a > 0:
            raise OutOfRange(f"a must be positive, got {self.a}")

    def replace(self, **changes) -> "InequalityParams":
        return replace(self, **changes)

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)
                if getattr(self, f.name) is not None}

    def _need(self, *names: str) -> None:
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise InconsistentParameters(f"missing parameters: {', '.join(missing)}")

    def check(self, tag: str) -> "InequalityParams":
        """Raise :class:`InconsistentParameters` unless the tagged relations hold."""
        if tag == "rubin-consistent":
            self._need("s", "p", "beta")
            _rubin_range(self.d, self.p, self.s)
            want = self.s + self.d * _inv(self.p) - 0.5 * self.d
            if abs(self.beta - want) > RELATION_TOL * max(1.0, abs(want)):
                raise InconsistentParameters(
                    f"beta = {self.beta} but s + d/p - d/2 = {want}")
        elif tag == "theta-consistent":
            self._need("theta", "p", "beta", "p1", "beta1")
            inv_p = 0.5 * (1.0 - self.theta) + self.theta * _inv(self.p1)
            if abs(_inv(self.p) - inv_p) > RELATION_TOL:
                raise InconsistentParameters(
                    f"1/p = {_inv(self.p)} but (1-theta)/2 + theta/p1 = {inv_p}")
            if abs(self.beta - self.theta * self.beta1) > RELATION_TOL * max(1.0, abs(self.beta)):
                raise InconsistentParameters(
                    f"beta = {self.beta} but theta * beta1 = {self.theta * self.beta1}")
        else:
            raise ValueError(f"unknown consistency tag {tag!r}")
        return self


def _rubin_range(d: int, p: float, s: float) -> None:
    if not 0.0 <= s < 0.5 * d:
        raise InconsistentParameters(f"need 0 <= s < d/2 = {0.5 * d}, got s = {s}")
    upper = math.inf if s >= 0.5 else 2.0 / (1.0 - 2.0 * s)
    if not 2.0 <= p <= upper * (1.0 + 1e-14):
        raise InconsistentParameters(f"need 2 <= p <= 2/(1-2s)_+ = {upper}, got p = {p}")


# ---------------------------------------------------------------------------
# norms


def weighted_lp_norm(f: RadialProfile, p: float, beta: float) -> float:
    """``|| |x|^{-beta} f ||_p``; ``p = inf`` is the grid maximum."""
    if not p >= 1.0:
        raise UnsupportedExponent(f"p must be >= 1, got {p}")
    d = f.grid.dimension
    r = f.grid.nodes
    mod = np.abs(f.values)
    if math.isinf(p):
        if beta > 0:
            raise NonIntegrableWeight(f"|x|^{-beta:g} is unbounded at the origin")
        return float(np.max(r ** (-beta) * mod))
    if beta * p >= d:
        raise NonIntegrableWeight(
            f"|x|^(-beta p) with beta p = {beta * p:g} >= d = {d} is not locally integrable")
    # log-space evaluation keeps large p from overflowing
    with np.errstate(divide="ignore"):
        logs = p * (np.log(mod) - beta * np.log(r)) + np.log(f.grid.weights)
        e = d - 1.0 - beta * p
        if e < 0.0:
            # r^e is singular at the origin: integrate the innermost stretch
            # [0, eps] exactly as |f(r_0)|^p eps^{e+1}/(e+1), f being flat there
            g = f.grid
            if g.log_mapped:
                eps = float(np.exp(g.panel_edges[0]))
            else:
                eps = float(g.panel_edges[1])
                logs = logs[g.panel_starts[1]:]
            inner = (math.log(g.surface) + p * math.log(mod[0]) + (e + 1.0) * math.log(eps)
                     - math.log(e + 1.0)) if mod[0] > 0 else -math.inf
            logs = np.append(logs, inner)
    top = np.max(logs)
    if not np.isfinite(top):
        return 0.0
    return float(np.exp((top + np.log(np.sum(np.exp(logs - top)))) / p))


def _spectral_weights(f: RadialProfile, s: float) -> np.ndarray:
    d = f.grid.dimension
    if s <= -0.5 * d:
        raise SingularExponent(f"need s > -d/2 = {-0.5 * d}, got s = {s}")
    spec = f.spectrum
    return spec.grid.weights * spec.grid.nodes ** (2.0 * s) * np.abs(spec.values) ** 2


def sobolev_norm(f: RadialProfile, s: float) -> float:
    """Homogeneous Sobolev norm ``(int |xi|^{2s} |f^|^2)^{1/2}``.

    For ``-d/2 < s < (1-d)/2`` the radial integrand is singular at the
    origin and the innermost frequency panel uses a Gauss-Jacobi rule.
    """
    if 2.0 * s + f.grid.dimension - 1.0 < 0.0 and s > -0.5 * f.grid.dimension:
        return float(np.sqrt(_spectral_power(f, 2.0 * s)))
    return float(np.sqrt(np.sum(_spectral_weights(f, s))))


def gradient_sq(f: RadialProfile) -> float:
    """``int |grad f|^2``, evaluated on the Fourier side as ``||f||_{H^1}^2``."""
    return float(np.sum(_spectral_weights(f, 1.0)))


def lp_norm_spectral(f: RadialProfile, q: float) -> float:
    """``||f^||_q`` on the frequency grid; ``q = inf`` is the grid maximum."""
    if not q >= 1.0:
        raise UnsupportedExponent(f"q must be >= 1, got {q}")
    spec = f.spectrum
    if math.isinf(q):
        return float(np.max(np.abs(spec.values)))
    return float(np.sum(spec.grid.weights * np.abs(spec.values) ** q) ** (1.0 / q))


# ---------------------------------------------------------------------------
# entropies and log-moments


def _xlogx(mod: np.ndarray) -> np.ndarray:
    out = np.zeros_like(mod)
    pos = mod > 0
    out[pos] = mod[pos] * np.log(mod[pos])
    return out


def entropy(f: RadialProfile) -> float:
    """``int |f|^2 log|f|`` with ``0 log 0 = 0``."""
    mod = np.abs(f.values)
    return float(np.dot(f.grid.weights, mod * _xlogx(mod)))


def mass(f: RadialProfile) -> float:
    """``int f`` (for nonnegative profiles, the ``L^1`` norm)."""
    return float(np.dot(f.grid.weights, f.values.real))


def mass_entropy(f: RadialProfile) -> float:
    """``int f log f`` for a nonnegative profile, ``0 log 0 = 0``."""
    if np.any(f.values.real < 0) or not f.is_real:
        raise ValueError("mass entropy needs a real nonnegative profile")
    return float(np.dot(f.grid.weights, _xlogx(f.values)))


def log_moment_physical(f: RadialProfile) -> float:
    """``int |f|^2 log|x|``."""
    return float(np.dot(f.grid.weights * np.log(f.grid.nodes), np.abs(f.values) ** 2))


def log_moment_fourier(f: RadialProfile) -> float:
    """``int |f^|^2 log|xi|``, the ``s``-derivative of ``||f||_{H^s}`` at 0 for unit ``f``."""
    spec = f.spectrum
    return float(np.dot(spec.grid.weights * np.log(spec.grid.nodes), np.abs(spec.values) ** 2))


# ---------------------------------------------------------------------------
# double integrals


def _check_lambda(d: int, lam: float) -> None:
    if not 0.0 < lam < d:
        raise OutOfRange(f"HLS exponent must satisfy 0 < lambda < d = {d}, got {lam}")


def hls_energy(f: RadialProfile, lam: float) -> float:
    """``int int f(x) f(y) |x - y|^{-lam} dx dy`` by a locally corrected Nystrom rule."""
    _check_lambda(f.grid.dimension, lam)
    mat = kernels.nystrom_matrix(f.grid, "riesz", lam)
    v = f.values.real
    return float(np.dot(f.grid.weights * v, mat @ v))


def log_hls_energy(f: RadialProfile) -> float:
    """``int int -log|x - y| f(x) f(y) dx dy``."""
    mat = kernels.nystrom_matrix(f.grid, "log")
    v = f.values.real
    return float(np.dot(f.grid.weights * v, mat @ v))


def riesz_constant(d: int, lam: float) -> float:
    """``c`` with ``int int f f |x-y|^{-lam} = c int |xi|^{lam-d} |f^|^2``."""
    _check_lambda(d, lam)
    return float(np.exp(0.5 * d * np.log(2.0 * np.pi) + (0.5 * d - lam) * np.log(2.0)
                        + gammaln(0.5 * (d - lam)) - gammaln(0.5 * lam)))


ORIGIN_NODES = 24


def _spectral_power(f: RadialProfile, q: float) -> float:
    """``int |xi|^q |f^|^2 dxi`` with a Gauss-Jacobi rule at the origin.

    The radial integrand ``rho^{q+d-1} |f^|^2`` is singular at the origin
    when ``q + d - 1 < 0``, so the innermost stretch ``[0, b]`` of the
    frequency grid is replaced by a Gauss-Jacobi rule for that weight, with
    ``f^`` evaluated there directly from the physical samples.
    """
    d = f.grid.dimension
    spec = f.spectrum
    g = spec.grid
    if g.log_mapped:
        b = float(np.exp(g.panel_edges[0]))
        keep = np.ones(g.n, dtype=bool)
    else:
        b = float(g.panel_edges[1])
        keep = np.arange(g.n) >= g.panel_starts[1]
    outer = np.dot(g.weights[keep] * g.nodes[keep] ** q, np.abs(spec.values[keep]) ** 2)
    x, w = roots_jacobi(ORIGIN_NODES, 0.0, q + d - 1.0)
    rho = 0.5 * b * (1.0 + x)
    nu = 0.5 * (d - 2)
    near = kernels.hankel_matrix(nu, rho, f.grid.nodes) @ (f.grid.radial_weights * f.values)
    inner = g.surface * (0.5 * b) ** (q + d) * np.dot(w, np.abs(near) ** 2)
    return float(outer + inner)


def hls_energy_fourier(f: RadialProfile, lam: float) -> float:
    """The HLS energy through the Riesz multiplier on the Fourier side.

    ``riesz_constant(d, lam) int |xi|^{lam-d} |f^|^2``; the origin
    singularity of the multiplier is integrated with a Gauss-Jacobi rule.
    """
    return riesz_constant(f.grid.dimension, lam) * _spectral_power(f, lam - f.grid.dimension)


def unit_norm_defect(f: RadialProfile) -> float:
    return abs(l2_norm(f) - 1.0)
