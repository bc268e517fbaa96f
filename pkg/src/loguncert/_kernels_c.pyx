# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; mirrors ``_kernels_py`` function for function."""

import numpy as np
cimport numpy as cnp
from libc.math cimport (cos, sin, sqrt, exp, log, lgamma, floor, fabs, log2,
                        M_PI, INFINITY)

cnp.import_array()

cdef double CROSSOVER = 12.5
cdef double DIRECT_ORDER = 3.5
cdef double SQRT_2_OVER_PI = 0.7978845608028654


cdef double _series(double nu, double z) nogil:
    cdef double q = -0.25 * z * z
    cdef double term = exp(-nu * log(2.0) - lgamma(nu + 1.0))
    cdef double total = term
    cdef int k
    for k in range(1, 80):
        term = term * q / (k * (k + nu))
        total += term
        if fabs(term) <= 1e-17 * fabs(total) + 1e-300:
            break
    return total


cdef double _asymptotic(double nu, double z) nogil:
    # Hankel expansion truncated at the smallest term; returns z^{-nu} J_nu(z)
    cdef double mu = 4.0 * nu * nu
    cdef double inv8z = 1.0 / (8.0 * z)
    cdef double p = 1.0, q = 0.0, term = 1.0, new
    cdef int k
    for k in range(1, 80):
        new = term * ((mu - (2 * k - 1) * (2 * k - 1)) / k) * inv8z
        if fabs(new) >= fabs(term):
            break
        if k % 2:
            q += (1.0 if ((k - 1) // 2) % 2 == 0 else -1.0) * new
        else:
            p += (1.0 if (k // 2) % 2 == 0 else -1.0) * new
        term = new
        if fabs(new) < 1e-18:
            break
    cdef double chi = z - (0.5 * nu + 0.25) * M_PI
    return sqrt(2.0 / (M_PI * z)) * (p * cos(chi) - q * sin(chi)) * exp(-nu * log(z))


cdef double _large_argument(double nu, double z) nogil:
    if nu <= DIRECT_ORDER:
        return _asymptotic(nu, z)
    cdef double base = nu - floor(nu)
    cdef double j_prev = _asymptotic(base, z) * exp(base * log(z))
    cdef double j_cur = _asymptotic(base + 1.0, z) * exp((base + 1.0) * log(z))
    cdef double order = base + 1.0, tmp
    while order < nu - 0.5:
        tmp = (2.0 * order / z) * j_cur - j_prev
        j_prev = j_cur
        j_cur = tmp
        order += 1.0
    return j_cur * exp(-nu * log(z))


cdef inline double _scaled(double nu, double z) nogil:
    z = fabs(z)
    if nu == -0.5:
        return SQRT_2_OVER_PI * cos(z)
    if nu == 0.5:
        if z < 1e-4:
            return SQRT_2_OVER_PI * (1.0 - z * z / 6.0)
        return SQRT_2_OVER_PI * sin(z) / z
    if z < CROSSOVER or z < nu:
        return _series(nu, z)
    return _large_argument(nu, z)


def scaled_bessel(double nu, z):
    """``z^{-nu} J_nu(z)`` elementwise."""
    cdef cnp.ndarray[double, ndim=1] flat = np.ascontiguousarray(z, dtype=float).ravel()
    cdef cnp.ndarray[double, ndim=1] out = np.empty_like(flat)
    cdef Py_ssize_t i, n = flat.shape[0]
    with nogil:
        for i in range(n):
            out[i] = _scaled(nu, flat[i])
    return out.reshape(np.shape(z))


def hankel_matrix(double nu, const double[::1] rho, const double[::1] r):
    cdef Py_ssize_t nj = rho.shape[0], ni = r.shape[0], i, j
    out = np.empty((nj, ni))
    cdef double[:, ::1] o = out
    with nogil:
        for j in range(nj):
            for i in range(ni):
                o[j, i] = _scaled(nu, rho[j] * r[i])
    return out


cdef inline Py_ssize_t _rule(double delta, double rr, double far, Py_ssize_t n_rules) nogil:
    if n_rules == 1:
        return 0
    cdef double theta = delta / sqrt(rr)
    if theta >= far:
        return 0
    if theta <= 0.0:
        return n_rules - 1
    cdef double k = floor(log2(far / theta))
    if k > n_rules - 2:
        k = n_rules - 2
    if k < 0:
        k = 0
    return <Py_ssize_t>k + 1


cdef inline double _mean(int kind, double lam, double delta, double rr, const double* nodes,
                         const double* weights, const cnp.int64_t* offsets,
                         Py_ssize_t n_rules, double far) nogil:
    cdef double d2, acc = 0.0
    cdef double half = -0.5 * lam
    cdef Py_ssize_t g = _rule(delta, rr, far, n_rules), l
    cdef Py_ssize_t lo = offsets[g], hi = offsets[g + 1]
    d2 = delta * delta
    if kind == 0 and lam == 1.0:
        for l in range(lo, hi):
            acc += weights[l] / sqrt(d2 + rr * nodes[l])
    elif kind == 0:
        for l in range(lo, hi):
            acc += weights[l] * exp(half * log(d2 + rr * nodes[l]))
    else:
        for l in range(lo, hi):
            acc += weights[l] * log(d2 + rr * nodes[l])
        acc *= -0.5
    return acc


def kernel_pairs(int kind, double lam, const double[::1] r, const double[::1] rho,
                 const double[::1] delta, const double[::1] nodes,
                 const double[::1] weights, const cnp.int64_t[::1] offsets,
                 double far_threshold):
    cdef Py_ssize_t n = r.shape[0], i
    out = np.empty(n)
    cdef double[::1] o = out
    cdef Py_ssize_t n_rules = offsets.shape[0] - 1
    with nogil:
        for i in range(n):
            o[i] = _mean(kind, lam, delta[i], r[i] * rho[i], &nodes[0], &weights[0], &offsets[0],
                         n_rules, far_threshold)
    return out


def kernel_matrix(int kind, double lam, const double[::1] r, const double[::1] nodes,
                  const double[::1] weights, const cnp.int64_t[::1] offsets,
                  double far_threshold):
    cdef Py_ssize_t n = r.shape[0], i, j
    out = np.empty((n, n))
    cdef double[:, ::1] o = out
    cdef double v
    cdef Py_ssize_t n_rules = offsets.shape[0] - 1
    with nogil:
        for i in range(n):
            for j in range(i, n):
                v = _mean(kind, lam, fabs(r[i] - r[j]), r[i] * r[j], &nodes[0], &weights[0], &offsets[0],
                          n_rules, far_threshold)
                o[i, j] = v
                o[j, i] = v
    return out
