"""Backend selection and quadrature tables for the hot kernels.

The compiled extension ``_kernels_c`` is used when it imports; otherwise
(or with ``LOGUNCERT_PURE=1``) the numpy fallback takes over.  Both expose
``scaled_bessel``, ``hankel_matrix``, ``kernel_pairs`` and ``kernel_matrix``.
"""

from __future__ import annotations

import os
import threading
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import gammaln, roots_jacobi

from . import _kernels_py

__all__ = [
    "BACKEND",
    "backend",
    "scaled_bessel",
    "bessel_j",
    "hankel_matrix",
    "angular_tables",
    "kernel_pairs",
    "kernel_matrix",
    "nystrom_matrix",
]


def _load_compiled():
    if os.environ.get("LOGUNCERT_PURE", "") not in ("", "0"):
        return None
    try:
        from . import _kernels_c
    except ImportError:
        return None
    return _kernels_c


_compiled = _load_compiled()
_impl = _compiled if _compiled is not None else _kernels_py
BACKEND = "compiled" if _compiled is not None else "numpy"


def backend(name: str | None = None):
    """Return the kernel module for ``name`` ("compiled", "numpy" or active)."""
    if name is None:
        return _impl
    if name == "numpy":
        return _kernels_py
    if name == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernels are not available")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def scaled_bessel(nu: float, z) -> np.ndarray:
    return _impl.scaled_bessel(float(nu), np.ascontiguousarray(z, dtype=float))


def bessel_j(nu: float, z) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    return scaled_bessel(nu, z) * np.abs(z) ** nu


def hankel_matrix(nu: float, rho: np.ndarray, r: np.ndarray) -> np.ndarray:
    return _impl.hankel_matrix(float(nu), np.ascontiguousarray(rho, dtype=float),
                               np.ascontiguousarray(r, dtype=float))


# ---------------------------------------------------------------------------
# angular quadrature

ANGULAR_NODES = 64
PANEL_NODES = 10
FAR_THRESHOLD = 0.25
BUCKETS = 64


@lru_cache(maxsize=None)
def angular_tables(d: int, m: int = ANGULAR_NODES):
    """Rules for the normalized angular mean over the sphere in R^d.

    Every rule is a list of ``A = 2(1 - cos theta)`` values with weights
    summing to one, so that the spherical mean of ``phi(|x - y|^2)`` is
    ``sum_l W_l phi(delta^2 + r rho A_l)``.  Rule 0 is Gauss-Jacobi in
    ``cos theta`` with weight ``(1 - c^2)^{(d-3)/2}``; rule ``k + 1`` is a
    composite Gauss rule in ``theta`` graded geometrically towards
    ``theta = 0`` for pairs with ``delta / sqrt(r rho)`` in
    ``(T 2^{-k-1}, T 2^{-k}]``, ``T = FAR_THRESHOLD``.  In d = 1 the sphere
    is the two-point set ``{+1, -1}``.
    """
    if d == 1:
        nodes = np.array([0.0, 4.0])
        weights = np.array([0.5, 0.5])
        return nodes, weights, np.array([0, 2], dtype=np.int64)

    alpha = 0.5 * (d - 3)
    c, w = roots_jacobi(m, alpha, alpha)
    rules = [(2.0 * (1.0 - c), w / w.sum())]
    norm = np.exp(0.5 * np.log(np.pi) + gammaln(0.5 * (d - 1)) - gammaln(0.5 * d))
    x, gw = leggauss(PANEL_NODES)
    for k in range(BUCKETS):
        top = FAR_THRESHOLD * 2.0 ** (-k)
        edges = [0.0, top / 4.0]
        while edges[-1] * 2.0 < np.pi / 2.0:
            edges.append(edges[-1] * 2.0)
        edges.append(np.pi)
        th, tw = [], []
        for a, b in zip(edges[:-1], edges[1:]):
            th.append(0.5 * (b - a) * x + 0.5 * (b + a))
            tw.append(0.5 * (b - a) * gw)
        th = np.concatenate(th)
        tw = np.concatenate(tw) * np.sin(th) ** (d - 2) / norm
        rules.append((4.0 * np.sin(0.5 * th) ** 2, tw))
    offsets = np.concatenate(([0], np.cumsum([a.size for a, _ in rules]))).astype(np.int64)
    nodes = np.concatenate([a for a, _ in rules])
    weights = np.concatenate([b for _, b in rules])
    return nodes, weights, offsets


KINDS = {"riesz": 0, "log": 1}


def kernel_pairs(kind: str, d: int, lam: float, r, rho, delta=None) -> np.ndarray:
    """Spherical mean ``K(r, rho)`` of the Riesz or logarithmic kernel.

    ``delta`` may carry ``|r - rho|`` computed to full relative precision
    (it defaults to the plain difference).
    """
    nodes, weights, offsets = angular_tables(d)
    r = np.ascontiguousarray(r, dtype=float)
    rho = np.ascontiguousarray(rho, dtype=float)
    delta = np.abs(r - rho) if delta is None else np.ascontiguousarray(delta, dtype=float)
    return _impl.kernel_pairs(KINDS[kind], float(lam), r, rho, delta,
                              nodes, weights, offsets, FAR_THRESHOLD)


def kernel_matrix(kind: str, d: int, lam: float, r) -> np.ndarray:
    nodes, weights, offsets = angular_tables(d)
    return _impl.kernel_matrix(KINDS[kind], float(lam), np.ascontiguousarray(r, dtype=float),
                               nodes, weights, offsets, FAR_THRESHOLD)


def singular_exponent(kind: str, d: int, lam: float) -> float:
    """``mu`` such that ``K(r, rho) = O(|r - rho|^{-mu})`` on the diagonal."""
    return max(0.0, lam - (d - 1)) if kind == "riesz" else 0.0


# ---------------------------------------------------------------------------
# locally corrected Nystrom matrix for radial double integrals

SUB_NODES = 16
SUB_RATIO = 0.15
NEAR_FACTOR = 0.5
INNER_FLOOR = 1e-14


@lru_cache(maxsize=8)
def _legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    return leggauss(n)


@lru_cache(maxsize=64)
def _jacobi_end(mu: float) -> tuple[np.ndarray, np.ndarray]:
    """Rule for ``int_0^1 g(x) dx`` exact when ``x^mu g`` is a polynomial."""
    x, w = roots_jacobi(SUB_NODES, 0.0, -mu)
    t = 0.5 * (1.0 + x)
    return t, w * 0.5 ** (1.0 - mu) * t ** mu


def _side(length: float, floor: float, mu: float) -> tuple[np.ndarray, np.ndarray]:
    """Distances in ``(0, length]`` from a singular end, graded geometrically.

    The innermost piece ``(0, floor)`` uses a Gauss-Jacobi rule adapted to
    ``x^{-mu}``; the rest are Gauss-Legendre panels with ratio ``SUB_RATIO``.
    """
    x, gw = _legendre(SUB_NODES)
    scales = [length]
    while scales[-1] * SUB_RATIO > floor:
        scales.append(scales[-1] * SUB_RATIO)
    edges = np.array(scales[::-1])
    lo, hi = edges[:-1], edges[1:]
    nodes = (0.5 * (hi - lo)[:, None] * x + 0.5 * (hi + lo)[:, None]).ravel()
    weights = (0.5 * (hi - lo)[:, None] * gw).ravel()
    t, tw = _jacobi_end(mu)
    return (np.concatenate((edges[0] * t, nodes)),
            np.concatenate((edges[0] * tw, weights)))


def graded_rule(a: float, b: float, x0: float, mu: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Composite rule on ``[a, b]`` graded towards ``x0``.

    Returns offsets ``x - x0`` (kept separately for precision) and weights.
    When ``x0`` lies inside the interval the rule resolves an integrable
    ``|x - x0|^{-mu}`` singularity.
    """
    length = b - a
    floor = INNER_FLOOR * length
    if a < x0 < b:
        lo, wl = _side(x0 - a, floor, mu)
        hi, wh = _side(b - x0, floor, mu)
        off, w = np.concatenate((-lo[::-1], hi)), np.concatenate((wl[::-1], wh))
        # a side of subnormal length underflows to zero weights at zero offset
        keep = w > 0.0
        return (off, w) if keep.all() else (off[keep], w[keep])
    gap = a - x0 if x0 <= a else x0 - b
    if gap <= floor:
        # x0 on (or within rounding of) an end: singular-end rule from that end
        off, w = _side(length, floor, mu)
        return (off + gap, w) if x0 <= a else (-(off + gap)[::-1], w[::-1])
    x, gw = _legendre(SUB_NODES)
    scales = [length]
    while scales[-1] * SUB_RATIO > max(gap, floor):
        scales.append(scales[-1] * SUB_RATIO)
    dist = gap + np.array([0.0] + scales[::-1])
    lo, hi = dist[:-1], dist[1:]
    off = (0.5 * (hi - lo)[:, None] * x + 0.5 * (hi + lo)[:, None]).ravel()
    w = (0.5 * (hi - lo)[:, None] * gw).ravel()
    return (off if x0 <= a else -off[::-1]), (w if x0 <= a else w[::-1])


def _barycentric_weights(u: np.ndarray) -> np.ndarray:
    diff = u[:, None] - u[None, :]
    np.fill_diagonal(diff, 1.0)
    return 1.0 / diff.prod(axis=1)


def lagrange_matrix(u: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """``L[s, j] = ell_j(targets[s])`` for the interpolant through ``u``."""
    bw = _barycentric_weights(u)
    diff = targets[:, None] - u[None, :]
    exact = diff == 0.0
    diff[exact] = 1.0
    terms = bw[None, :] / diff
    out = terms / terms.sum(axis=1, keepdims=True)
    rows = np.nonzero(exact.any(axis=1))[0]
    out[rows] = exact[rows].astype(float)
    return out


_nystrom_cache: dict = {}
_nystrom_lock = threading.Lock()


def nystrom_matrix(grid, kind: str, lam: float = 0.0) -> np.ndarray:
    """Matrix ``M`` with ``int int f(x) f(y) k(x - y) ~ (w f) . (M f)``.

    ``M[i, j]`` is ``w_j K(r_i, r_j)`` away from the diagonal; for panels
    within half a panel width of ``r_i`` the inner integral is replaced by a
    product rule that integrates the panel interpolant of ``f`` against
    ``K(r_i, .)`` with sub-panels graded towards ``r_i``.
    """
    key = (grid.key, kind, float(lam), BACKEND)
    with _nystrom_lock:
        hit = _nystrom_cache.get(key)
        if hit is None:
            hit = _build_nystrom(grid, kind, float(lam))
            hit.setflags(write=False)
            _nystrom_cache[key] = hit
    return hit


def clear_cache() -> None:
    with _nystrom_lock:
        _nystrom_cache.clear()


def _build_nystrom(grid, kind: str, lam: float) -> np.ndarray:
    d = grid.dimension
    r = grid.nodes
    u = grid.u_nodes
    edges = grid.panel_edges
    widths = np.diff(edges)
    mu = singular_exponent(kind, d, lam)
    mat = kernel_matrix(kind, d, lam, r) * grid.weights[None, :]

    blocks = []  # (i, panel, sub-node slice)
    sub_rho, sub_outer, sub_delta, sub_meas, sub_u = [], [], [], [], []
    count = 0
    for i in range(r.size):
        dist = np.maximum(edges[:-1] - u[i], 0.0) + np.maximum(u[i] - edges[1:], 0.0)
        for b in np.nonzero(dist < NEAR_FACTOR * widths)[0]:
            off, ws = graded_rule(edges[b], edges[b + 1], u[i], mu)
            us = u[i] + off
            if grid.log_mapped:
                rho = r[i] * np.exp(off)
                delta = r[i] * np.abs(np.expm1(off))
                jac = rho
            else:
                rho = r[i] + off
                delta = np.abs(off)
                jac = 1.0
            blocks.append((i, b, slice(count, count + us.size)))
            sub_rho.append(rho)
            sub_delta.append(delta)
            sub_u.append(us)
            sub_meas.append(ws * grid.surface * rho ** (d - 1) * jac)
            sub_outer.append(np.full(us.size, r[i]))
            count += us.size
    kvals = kernel_pairs(kind, d, lam, np.concatenate(sub_outer), np.concatenate(sub_rho),
                         np.concatenate(sub_delta))
    weighted = kvals * np.concatenate(sub_meas)
    u_all = np.concatenate(sub_u)
    for i, b, sl in blocks:
        pan = grid.panel_of(b)
        mid, half = 0.5 * (edges[b] + edges[b + 1]), 0.5 * widths[b]
        basis = lagrange_matrix((u[pan] - mid) / half, (u_all[sl] - mid) / half)
        mat[i, pan] = weighted[sl] @ basis
    return mat
