# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled fill of the log matching-transform table (the O(d*n^2) hot loop)."""

from libc.math cimport exp, log


def fill_half(int d, int n, double beta, double[::1] lnfact, double[::1] out):
    """Write values[j] = log E[exp(-2*beta*X(dj, dn))] for j = 0..n//2."""
    cdef Py_ssize_t j, k, mk, m, half, x, x0, xmax
    cdef double base, coef, mx, acc, t
    cdef double LN2 = 0.6931471805599453
    m = d * n
    half = m // 2
    coef = LN2 - 2.0 * beta
    with nogil:
        for j in range(n // 2 + 1):
            k = d * j
            mk = m - k
            base = lnfact[k] + lnfact[mk] + lnfact[half] - lnfact[m]
            x0 = k & 1
            xmax = k if k < mk else mk
            mx = -1e308
            for x in range(x0, xmax + 1, 2):
                t = base - lnfact[x] - lnfact[(k - x) >> 1] - lnfact[(mk - x) >> 1] + coef * x
                if t > mx:
                    mx = t
            acc = 0.0
            for x in range(x0, xmax + 1, 2):
                t = base - lnfact[x] - lnfact[(k - x) >> 1] - lnfact[(mk - x) >> 1] + coef * x
                acc += exp(t - mx)
            out[j] = mx + log(acc)
