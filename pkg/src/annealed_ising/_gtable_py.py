"""Pure-numpy fill of the log matching-transform table."""

from __future__ import annotations

import numpy as np

_LN2 = 0.6931471805599453


def fill_half(d: int, n: int, beta: float, lnfact: np.ndarray, out: np.ndarray) -> None:
    """Write values[j] = log E[exp(-2*beta*X(dj, dn))] for j = 0..n//2.

    The inner sum over the support of the cross-edge count X runs through a
    max-shifted log-sum-exp, vectorized over the (parity-constrained) support.
    """
    m = d * n
    half = m // 2
    coef = _LN2 - 2.0 * beta
    for j in range(n // 2 + 1):
        k = d * j
        mk = m - k
        base = lnfact[k] + lnfact[mk] + lnfact[half] - lnfact[m]
        xs = np.arange(k & 1, min(k, mk) + 1, 2)
        t = base - lnfact[xs] - lnfact[(k - xs) >> 1] - lnfact[(mk - xs) >> 1] + coef * xs
        mx = t.max()
        out[j] = mx + np.log(np.exp(t - mx).sum())
