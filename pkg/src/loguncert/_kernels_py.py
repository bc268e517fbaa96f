"""Pure numpy implementations of the hot kernels.

Same signatures as the compiled ``_kernels_c`` extension; used when the
extension is not built or ``LOGUNCERT_PURE=1`` is set.
"""

from __future__ import annotations

import math

import numpy as np

SERIES_TERMS = 80
PAIR_CHUNK = 1 << 16


CROSSOVER = 12.5
DIRECT_ORDER = 3.5


def _series(nu: float, z: np.ndarray) -> np.ndarray:
    # z^{-nu} J_nu(z) = 2^{-nu} sum_k (-z^2/4)^k / (k! Gamma(k+nu+1))
    q = -0.25 * z * z
    term = np.full_like(z, math.exp(-nu * math.log(2.0) - math.lgamma(nu + 1.0)))
    total = term.copy()
    for k in range(1, SERIES_TERMS):
        term = term * q / (k * (k + nu))
        total += term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total) + 1e-300):
            break
    return total


def _asymptotic(nu: float, z: np.ndarray) -> np.ndarray:
    # Hankel expansion, each entry truncated at its smallest term
    mu = 4.0 * nu * nu
    inv8z = 1.0 / (8.0 * z)
    p = np.ones_like(z)
    q = np.zeros_like(z)
    term = np.ones_like(z)
    done = np.zeros(z.shape, dtype=bool)
    for k in range(1, 80):
        new = term * ((mu - (2 * k - 1) ** 2) / k) * inv8z
        done |= np.abs(new) >= np.abs(term)
        new = np.where(done, 0.0, new)
        if k % 2:
            q += (-1) ** ((k - 1) // 2) * new
        else:
            p += (-1) ** (k // 2) * new
        term = np.where(done, term, new)
        if np.all(done | (np.abs(new) < 1e-18)):
            break
    chi = z - (0.5 * nu + 0.25) * np.pi
    return np.sqrt(2.0 / (np.pi * z)) * (p * np.cos(chi) - q * np.sin(chi)) * z ** (-nu)


def _large_argument(nu: float, z: np.ndarray) -> np.ndarray:
    """``z^{-nu} J_nu(z)`` for ``z >= max(CROSSOVER, nu)``."""
    if nu <= DIRECT_ORDER:
        return _asymptotic(nu, z)
    # upward recurrence from the low orders is stable while nu <= z
    base = nu - math.floor(nu)
    j_prev = _asymptotic(base, z) * z ** base
    j_cur = _asymptotic(base + 1.0, z) * z ** (base + 1.0)
    order = base + 1.0
    while order < nu - 0.5:
        j_prev, j_cur = j_cur, (2.0 * order / z) * j_cur - j_prev
        order += 1.0
    return j_cur * z ** (-nu)


def scaled_bessel(nu: float, z) -> np.ndarray:
    """``z^{-nu} J_nu(z)`` for ``z >= 0`` (finite at the origin)."""
    z = np.abs(np.asarray(z, dtype=float))
    if nu == -0.5:
        return math.sqrt(2.0 / math.pi) * np.cos(z)
    if nu == 0.5:
        return math.sqrt(2.0 / math.pi) * np.sinc(z / math.pi)
    out = np.empty_like(z)
    small = (z < CROSSOVER) | (z < nu)
    out[small] = _series(nu, z[small])
    out[~small] = _large_argument(nu, z[~small])
    return out


def bessel_j(nu: float, z) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    return scaled_bessel(nu, z) * np.abs(z) ** nu


def hankel_matrix(nu: float, rho: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Matrix ``k[j, i] = (rho_j r_i)^{-nu} J_nu(rho_j r_i)``."""
    rho = np.asarray(rho, dtype=float)
    r = np.asarray(r, dtype=float)
    out = np.empty((rho.size, r.size))
    rows = max(1, PAIR_CHUNK * 8 // max(r.size, 1))
    for j0 in range(0, rho.size, rows):
        z = np.multiply.outer(rho[j0:j0 + rows], r)
        out[j0:j0 + rows] = scaled_bessel(nu, z.ravel()).reshape(z.shape)
    return out


def _rule_index(delta: np.ndarray, rr: np.ndarray, far_threshold: float,
                n_buckets: int) -> np.ndarray:
    with np.errstate(divide="ignore"):
        theta = delta / np.sqrt(rr)
        k = np.floor(np.log2(far_threshold / theta))
    k = np.where(theta >= far_threshold, -1, np.clip(k, 0, n_buckets - 1))
    return (k + 1).astype(np.int64)


def kernel_pairs(kind: int, lam: float, r: np.ndarray, rho: np.ndarray,
                 delta: np.ndarray, nodes: np.ndarray, weights: np.ndarray,
                 offsets: np.ndarray, far_threshold: float) -> np.ndarray:
    """Angular mean of ``|x-y|^{-lam}`` (kind 0) or ``-log|x-y|`` (kind 1).

    Rule ``g`` occupies ``nodes[offsets[g]:offsets[g+1]]``; every rule
    integrates ``phi(delta^2 + r rho A)`` against normalized weights, where
    ``A = 2(1 - cos theta)``.  Rule 0 serves well separated pairs, rule
    ``k+1`` pairs with ``delta/sqrt(r rho)`` in bucket ``k``.  ``delta``
    is ``|r - rho|``, passed separately so that near-coincident pairs keep
    their relative precision.
    """
    r = np.asarray(r, dtype=float)
    rho = np.asarray(rho, dtype=float)
    delta = np.asarray(delta, dtype=float)
    rr = r * rho
    n_rules = offsets.size - 1
    if n_rules == 1:
        idx = np.zeros(r.size, dtype=np.int64)
    else:
        idx = _rule_index(delta, rr, far_threshold, n_rules - 1)
    out = np.empty(r.size)
    for g in np.unique(idx):
        sel = np.nonzero(idx == g)[0]
        a = nodes[offsets[g]:offsets[g + 1]]
        w = weights[offsets[g]:offsets[g + 1]]
        step = max(1, PAIR_CHUNK // a.size)
        for s0 in range(0, sel.size, step):
            s = sel[s0:s0 + step]
            x = (delta[s] ** 2)[:, None] + rr[s][:, None] * a[None, :]
            # coincident points in d = 1 give +inf, as the kernel does
            with np.errstate(divide="ignore"):
                if kind == 0:
                    vals = np.exp(-0.5 * lam * np.log(x))
                else:
                    vals = -0.5 * np.log(x)
            out[s] = vals @ w
    return out


def kernel_matrix(kind: int, lam: float, r: np.ndarray, nodes: np.ndarray,
                  weights: np.ndarray, offsets: np.ndarray,
                  far_threshold: float) -> np.ndarray:
    """Symmetric matrix of :func:`kernel_pairs` over all node pairs."""
    r = np.asarray(r, dtype=float)
    n = r.size
    iu, ju = np.triu_indices(n)
    vals = kernel_pairs(kind, lam, r[iu], r[ju], np.abs(r[iu] - r[ju]), nodes, weights,
                        offsets, far_threshold)
    out = np.empty((n, n))
    out[iu, ju] = vals
    out[ju, iu] = vals
    return out
