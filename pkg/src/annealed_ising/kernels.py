"""Backend selection for the table-fill kernel: compiled when available."""

from __future__ import annotations

import math

import numpy as np

from . import _gtable_py

try:
    from . import _gtable_core as _core
except ImportError:  # pragma: no cover - depends on the build environment
    _core = None

KERNEL_BACKEND = "cython" if _core is not None else "numpy"

__all__ = ["KERNEL_BACKEND", "gtable_values", "log_factorials"]


def log_factorials(m: int) -> np.ndarray:
    """log(i!) for i = 0..m; per-entry lgamma keeps every entry within ~1 ulp."""
    return np.array([math.lgamma(i + 1.0) for i in range(m + 1)], dtype=np.float64)


def gtable_values(d: int, n: int, beta: float, backend: str | None = None) -> np.ndarray:
    """Full table values[j] = log g_beta(dj, dn), j = 0..n.

    Only j <= n/2 is computed; the rest is the k <-> m-k mirror.
    """
    impl = _pick(backend)
    out = np.empty(n + 1)
    impl.fill_half(d, n, float(beta), log_factorials(d * n), out[: n // 2 + 1])
    out[n // 2 + 1 :] = out[: (n + 1) // 2][::-1]
    # g(0, m) = g(m, m) = 1 exactly, and g <= 1 throughout: pin the endpoints
    # and clamp the positive fp dust left by the lnfact cancellations.
    out[0] = 0.0
    out[n] = 0.0
    np.minimum(out, 0.0, out=out)
    return out


def _pick(backend: str | None):
    if backend is None:
        return _core if _core is not None else _gtable_py
    if backend == "cython":
        if _core is None:
            raise RuntimeError("compiled kernel requested but not built")
        return _core
    if backend == "numpy":
        return _gtable_py
    raise ValueError(f"unknown kernel backend: {backend!r}")
